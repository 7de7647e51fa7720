use super::{ln_bracket, product_of_powers, BoundVariant, Method, OpResult};
use crate::config::{MisoConfig, Threshold};
use crate::error::Result;
use crate::quadrature::integrate;
use crate::special::{ln_factorial, regularized_lower_gamma, Accuracy};

/// Exact MISO-FAS outage probability.
///
/// ```text
/// P = ∫_0^{γσ²} f_N(t) [1 - Q_N(√(2ρ²t/(σ²(1-ρ²))), √(2γ/(1-ρ²)))]^{M-1} dt
/// ```
///
/// with `f_N` the Gamma(N, σ²) density of the reference port gain. The power
/// is taken in the log domain.
pub fn miso_exact_op(cfg: &MisoConfig, th: Threshold, acc: &Accuracy) -> Result<OpResult> {
    cfg.validate()?;
    acc.validate()?;
    let n = cfg.n_antennas;
    let s2 = cfg.sigma2;
    let rho_sq = cfg.rho * cfg.rho;
    let gamma = th.value();
    let others = f64::from(cfg.m_ports - 1);
    let ln_norm = f64::from(n) * s2.ln() + ln_factorial(u64::from(n) - 1);
    let integrand = |t: f64| -> Result<f64> {
        if t <= 0.0 {
            return Ok(if n == 1 { 1.0 / s2 } else { 0.0 });
        }
        let ln_pdf = f64::from(n - 1) * t.ln() - t / s2 - ln_norm;
        let ln_rest = if others > 0.0 {
            ln_bracket(n, rho_sq, t / s2, gamma, acc)?
        } else {
            0.0
        };
        Ok(product_of_powers([(1.0, ln_pdf), (others, ln_rest)]))
    };
    let r = integrate(integrand, 0.0, gamma * s2, acc)?;
    Ok(OpResult {
        value: r.value.clamp(0.0, 1.0),
        method: Method::Exact,
        quadrature_error: r.error,
    })
}

/// Closed-form upper bound `P(N, γ) (1 - e^{-cγ/(1-ρ²)})^{M-1}`, `c = 2`
/// for [`BoundVariant::AsPrinted`] and `c = 1` for [`BoundVariant::AsDerived`].
pub fn miso_op_upper(cfg: &MisoConfig, th: Threshold, variant: BoundVariant) -> Result<OpResult> {
    cfg.validate()?;
    let gamma = th.value();
    let c = match variant {
        BoundVariant::AsPrinted => 2.0,
        BoundVariant::AsDerived => 1.0,
    };
    let first = regularized_lower_gamma(cfg.n_antennas, gamma)?;
    let x = c * gamma / (1.0 - cfg.rho * cfg.rho);
    let ln_factor = (-(-x).exp()).ln_1p();
    let value = first * product_of_powers([(f64::from(cfg.m_ports - 1), ln_factor)]);
    Ok(OpResult::closed_form(value, Method::UpperBound))
}

/// Closed-form lower bound: the Marcum-Q bracket of the exact integrand
/// evaluated at the end of the range, `P(N, γ) [1 - Q_N(√(2ρ²γ/(1-ρ²)),
/// √(2γ/(1-ρ²)))]^{M-1}`.
pub fn miso_op_lower(cfg: &MisoConfig, th: Threshold) -> Result<OpResult> {
    cfg.validate()?;
    let gamma = th.value();
    let acc = Accuracy::relative(1e-12);
    let first = regularized_lower_gamma(cfg.n_antennas, gamma)?;
    let others = f64::from(cfg.m_ports - 1);
    let ln_rest = if others > 0.0 {
        ln_bracket(cfg.n_antennas, cfg.rho * cfg.rho, gamma, gamma, &acc)?
    } else {
        0.0
    };
    Ok(OpResult::closed_form(
        first * product_of_powers([(others, ln_rest)]),
        Method::LowerBound,
    ))
}
