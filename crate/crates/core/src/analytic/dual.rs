use super::{ln_bracket, product_of_powers, Method, OpResult};
use crate::config::{DualConfig, Threshold};
use crate::correlation::jakes_coefficients;
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::special::Accuracy;

// (power correlation, number of ports sharing it) for the three port classes:
// other receive ports, other transmit ports, and pairs differing in both.
fn port_classes(cfg: &DualConfig) -> [(f64, f64); 3] {
    let r1 = cfg.rho1 * cfg.rho1;
    let r2 = cfg.rho2 * cfg.rho2;
    let mr = f64::from(cfg.m_r - 1);
    let mt = f64::from(cfg.m_t - 1);
    [(r1, mr), (r2, mt), (r1 * r2, mr * mt)]
}

/// `∫_0^γ e^{-t} Π_i [1 - Q_1(√(2ρ_i² t/(1-ρ_i²)), √(2γ/(1-ρ_i²)))]^{k_i} dt`
/// for ports grouped as `(ρ_i², k_i)`.
fn selection_integral(classes: &[(f64, f64)], gamma: f64, acc: &Accuracy) -> Result<OpResult> {
    acc.validate()?;
    let integrand = |t: f64| -> Result<f64> {
        let mut terms = Vec::with_capacity(classes.len() + 1);
        terms.push((1.0, -t));
        for &(rho_sq, k) in classes {
            if k > 0.0 {
                terms.push((k, ln_bracket(1, rho_sq, t, gamma, acc)?));
            }
        }
        Ok(product_of_powers(terms))
    };
    let r = integrate(integrand, 0.0, gamma, acc)?;
    Ok(OpResult {
        value: r.value.clamp(0.0, 1.0),
        method: Method::Exact,
        quadrature_error: r.error,
    })
}

/// Exact Dual-FAS outage probability, conditioning on the reference pair
/// `(1, 1)`; the gain axis is normalized by `σ²`.
pub fn dual_exact_op(cfg: &DualConfig, th: Threshold, acc: &Accuracy) -> Result<OpResult> {
    cfg.validate()?;
    selection_integral(&port_classes(cfg), th.value(), acc)
}

/// `(1-e^{-γ}) Π (1-e^{-γ/(1-ρ_i²)})^{k_i}` over the three port classes.
pub fn dual_op_upper(cfg: &DualConfig, th: Threshold) -> Result<OpResult> {
    cfg.validate()?;
    let gamma = th.value();
    let first = -(-gamma).exp_m1();
    let rest = product_of_powers(
        port_classes(cfg)
            .iter()
            .map(|&(rho_sq, k)| (k, (-(-gamma / (1.0 - rho_sq)).exp()).ln_1p())),
    );
    Ok(OpResult::closed_form(first * rest, Method::UpperBound))
}

/// `(1-e^{-γ})` times the three Marcum-Q brackets evaluated at `t = γ`.
pub fn dual_op_lower(cfg: &DualConfig, th: Threshold) -> Result<OpResult> {
    cfg.validate()?;
    let gamma = th.value();
    let acc = Accuracy::relative(1e-12);
    let first = -(-gamma).exp_m1();
    let mut terms = Vec::with_capacity(3);
    for (rho_sq, k) in port_classes(cfg) {
        if k > 0.0 {
            terms.push((k, ln_bracket(1, rho_sq, gamma, gamma, &acc)?));
        }
    }
    Ok(OpResult::closed_form(
        first * product_of_powers(terms),
        Method::LowerBound,
    ))
}

/// Single-antenna transmitter into an `m_r`-port receiver spanning `w`
/// wavelengths, with Jakes correlation `ρ_i = J_0(2π(i-1)w/(m_r-1))` to
/// port 1.
pub fn rx_siso_fas_op(m_r: usize, w: f64, th: Threshold, acc: &Accuracy) -> Result<OpResult> {
    let rho = jakes_coefficients(m_r, w)?;
    rx_siso_fas_op_with(&rho, th, acc)
}

/// As [`rx_siso_fas_op`] with an explicit correlation vector; `rho[0]` is the
/// reference port and is ignored. Only `ρ_i²` enters, so signs are
/// immaterial.
pub fn rx_siso_fas_op_with(rho: &[f64], th: Threshold, acc: &Accuracy) -> Result<OpResult> {
    if rho.is_empty() {
        return Err(Error::invalid("rho", "needs at least the reference port"));
    }
    let mut classes = Vec::with_capacity(rho.len() - 1);
    for &r in &rho[1..] {
        let rho_sq = r * r;
        if !(rho_sq < 1.0) {
            return Err(Error::invalid("rho", format!("|rho_i| must be below 1, got {r}")));
        }
        classes.push((rho_sq, 1.0));
    }
    selection_integral(&classes, th.value(), acc)
}
