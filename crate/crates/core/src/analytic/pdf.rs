use nalgebra::DMatrix;

use crate::config::{DualConfig, MisoConfig};
use crate::error::{Error, Result};
use crate::special::{bessel_i_scaled, ln_factorial};

// ln(e^{-x} I_ν(x)), falling back to the leading series term when the scaled
// value underflows (tiny x, large ν).
fn ln_bessel_i_scaled(nu: u32, x: f64) -> Result<f64> {
    let v = bessel_i_scaled(nu, x)?;
    if v > 0.0 {
        return Ok(v.ln());
    }
    Ok(f64::from(nu) * (0.5 * x).ln() - ln_factorial(u64::from(nu)) - x)
}

fn check_positive(name: &'static str, values: impl IntoIterator<Item = f64>) -> Result<()> {
    for v in values {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!(
                "{name} entries must be positive and finite, got {v}"
            )));
        }
    }
    Ok(())
}

/// Joint density of the MISO-FAS port gains `(X_1, ..., X_M)`.
///
/// `X_1` is Gamma(N, σ²). Given `X_1 = z_1`, each other `X_m` is
/// independently a scaled noncentral chi-square with `2N` degrees of freedom:
///
/// ```text
/// f(z | z_1) = (1/s) e^{-(z + ρ²z_1)/s} (z/(ρ²z_1))^{(N-1)/2} I_{N-1}(2ρ√(z z_1)/s),
/// s = σ²(1-ρ²)
/// ```
///
/// which tends to the Gamma(N, s) density as `ρ → 0`.
pub fn miso_joint_pdf(cfg: &MisoConfig, z: &[f64]) -> Result<f64> {
    cfg.validate()?;
    if z.len() != cfg.m_ports as usize {
        return Err(Error::invalid(
            "z",
            format!("expected {} gains, got {}", cfg.m_ports, z.len()),
        ));
    }
    check_positive("z", z.iter().copied())?;
    let n = cfg.n_antennas;
    let nm1 = f64::from(n - 1);
    let s2 = cfg.sigma2;
    let z1 = z[0];
    let mut ln_f = nm1 * z1.ln() - z1 / s2 - f64::from(n) * s2.ln() - ln_factorial(u64::from(n) - 1);
    let rho = cfg.rho;
    let s = s2 * (1.0 - rho * rho);
    for &x in &z[1..] {
        ln_f += if rho == 0.0 {
            nm1 * x.ln() - x / s - f64::from(n) * s.ln() - ln_factorial(u64::from(n) - 1)
        } else {
            let arg = 2.0 * rho * (x * z1).sqrt() / s;
            let gap = x.sqrt() - rho * z1.sqrt();
            -s.ln() - gap * gap / s + 0.5 * nm1 * (x.ln() - (rho * rho * z1).ln()) + ln_bessel_i_scaled(n - 1, arg)?
        };
    }
    Ok(ln_f.exp())
}

/// Joint density of the Dual-FAS channel amplitudes `|h_ij|`, an
/// `M_R × M_T` matrix.
///
/// `|h_11|` is Rayleigh with `E|h_11|² = σ²`. Given it, every other amplitude
/// is independently Rician with noncentrality `ρ|h_11|` and diffuse power
/// `s = σ²(1-ρ²)`, where `ρ` is `ρ₁`, `ρ₂` or `ρ₁ρ₂` for pairs sharing the
/// transmit port, the receive port, or neither.
pub fn dual_joint_pdf(cfg: &DualConfig, r: &DMatrix<f64>) -> Result<f64> {
    cfg.validate()?;
    if r.shape() != (cfg.m_r as usize, cfg.m_t as usize) {
        return Err(Error::invalid(
            "r",
            format!("expected {}x{} amplitudes, got {:?}", cfg.m_r, cfg.m_t, r.shape()),
        ));
    }
    check_positive("r", r.iter().copied())?;
    let s2 = cfg.sigma2;
    let r11 = r[(0, 0)];
    let mut ln_f = (2.0 * r11 / s2).ln() - r11 * r11 / s2;
    for j in 0..r.ncols() {
        for i in 0..r.nrows() {
            if i == 0 && j == 0 {
                continue;
            }
            let rho = match (i, j) {
                (_, 0) => cfg.rho1,
                (0, _) => cfg.rho2,
                _ => cfg.rho1 * cfg.rho2,
            };
            let x = r[(i, j)];
            let s = s2 * (1.0 - rho * rho);
            let gap = x - rho * r11;
            ln_f += (2.0 * x / s).ln() - gap * gap / s + ln_bessel_i_scaled(0, 2.0 * rho * x * r11 / s)?;
        }
    }
    Ok(ln_f.exp())
}
