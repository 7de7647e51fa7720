//! Outage probability in closed and open form.
//!
//! Exact values are single integrals over the gain of the reference port
//! (port 1, or the pair `(1, 1)` in Dual-FAS): conditioned on it, every other
//! port is an independent noncentral chi-square variable whose CDF is a
//! Marcum-Q bracket `1 - Q_N(a, b)`. Bounds freeze that bracket at one end of
//! the integration range.

mod diversity;
mod dual;
mod miso;
mod pdf;

pub use diversity::{diversity_estimate, DiversityEstimate};
pub use dual::{dual_exact_op, dual_op_lower, dual_op_upper, rx_siso_fas_op, rx_siso_fas_op_with};
pub use miso::{miso_exact_op, miso_op_lower, miso_op_upper};
pub use pdf::{dual_joint_pdf, miso_joint_pdf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::monte_carlo::McEstimate;
use crate::special::{marcum_q_pair, Accuracy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    UpperBound,
    LowerBound,
    MonteCarlo,
}

/// One outage value and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpResult {
    pub value: f64,
    pub method: Method,
    /// Estimated absolute error of the quadrature; 0 for closed forms.
    pub quadrature_error: f64,
}

impl OpResult {
    fn closed_form(value: f64, method: Method) -> Self {
        OpResult {
            value: value.clamp(0.0, 1.0),
            method,
            quadrature_error: 0.0,
        }
    }
}

impl From<&McEstimate> for OpResult {
    fn from(e: &McEstimate) -> Self {
        OpResult::closed_form(e.p_hat, Method::MonteCarlo)
    }
}

/// Exponent convention of the MISO upper bound.
///
/// `AsPrinted` uses `exp(-2γ/(σ²(1-ρ²)))` per factor, `AsDerived` uses
/// `exp(-γ/(σ²(1-ρ²)))`, which is what the Marcum-Q inequality
/// `Q_N(a, b) >= exp(-b²/2)` gives directly. Both dominate the exact value;
/// `AsDerived` is the tighter of the two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    #[default]
    AsPrinted,
    AsDerived,
}

/// `ln(1 - Q_N(a, b))` for the Rician bracket of a port with amplitude
/// correlation `rho` to the reference, conditioned on reference gain `t`
/// (unit variance) and threshold `gamma`.
fn ln_bracket(order: u32, rho_sq: f64, t: f64, gamma: f64, acc: &Accuracy) -> Result<f64> {
    let a = (2.0 * rho_sq * t / (1.0 - rho_sq)).sqrt();
    let b = (2.0 * gamma / (1.0 - rho_sq)).sqrt();
    Ok(marcum_q_pair(order, a, b, acc)?.ln_p())
}

/// `exp(Σ k_i ln x_i)`, skipping factors with a zero exponent so that an
/// empty product stays 1 even when `ln x_i = -inf`.
fn product_of_powers(terms: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    terms
        .into_iter()
        .filter(|&(k, _)| k != 0.0)
        .map(|(k, ln_x)| k * ln_x)
        .sum::<f64>()
        .exp()
}
