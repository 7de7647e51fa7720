use serde::{Deserialize, Serialize};

use super::OpResult;
use crate::config::Threshold;
use crate::error::{Error, Result};

const MIN_R_SQUARED: f64 = 0.99;
const MAX_RELATIVE_QUADRATURE_ERROR: f64 = 0.1;

/// Log-log slope of outage versus threshold over a small-threshold range.
///
/// Outage behaves like `γ_th^d` as `γ_th → 0`, so the fitted slope estimates
/// the diversity order `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiversityEstimate {
    pub slope: f64,
    pub fit_range: (f64, f64),
    pub r_squared: f64,
}

/// Least-squares fit of `ln P_out` against `ln γ_th` at `n_points`
/// log-spaced thresholds in `[fit_lo, fit_hi]`.
///
/// Evaluators should use a relative accuracy (see
/// [`Accuracy::relative`](crate::special::Accuracy::relative)); outage values
/// in this range are often far below any absolute tolerance. Fails with
/// [`Error::DegenerateFit`] when an outage value is not positive, its
/// quadrature error exceeds 10% of the value, or `r² < 0.99`.
pub fn diversity_estimate<F>(mut evaluator: F, fit_lo: f64, fit_hi: f64, n_points: usize) -> Result<DiversityEstimate>
where
    F: FnMut(Threshold) -> Result<OpResult>,
{
    if !(fit_lo > 0.0 && fit_lo.is_finite()) {
        return Err(Error::invalid("fit_lo", format!("must be positive, got {fit_lo}")));
    }
    if !(fit_hi > fit_lo && fit_hi.is_finite()) {
        return Err(Error::invalid("fit_hi", format!("must exceed fit_lo, got {fit_hi}")));
    }
    if n_points < 4 {
        return Err(Error::invalid("n_points", "must be at least 4"));
    }
    let (ln_lo, ln_hi) = (fit_lo.ln(), fit_hi.ln());
    let mut xs = Vec::with_capacity(n_points);
    let mut ys = Vec::with_capacity(n_points);
    for k in 0..n_points {
        let x = ln_lo + (ln_hi - ln_lo) * k as f64 / (n_points - 1) as f64;
        let gamma = x.exp();
        let op = evaluator(Threshold::linear(gamma)?)?;
        if !(op.value > 0.0) {
            return Err(Error::DegenerateFit(format!(
                "outage is {} at threshold {gamma:e}",
                op.value
            )));
        }
        if op.quadrature_error > MAX_RELATIVE_QUADRATURE_ERROR * op.value {
            return Err(Error::DegenerateFit(format!(
                "quadrature error {:e} is not small against outage {:e} at threshold {gamma:e}",
                op.quadrature_error, op.value
            )));
        }
        xs.push(x);
        ys.push(op.value.ln());
    }
    let n = n_points as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        0.0
    } else {
        (sxy * sxy / (sxx * syy)).min(1.0)
    };
    if r_squared < MIN_R_SQUARED {
        return Err(Error::DegenerateFit(format!(
            "log-log fit is not linear (r² = {r_squared:.4})"
        )));
    }
    Ok(DiversityEstimate {
        slope,
        fit_range: (fit_lo, fit_hi),
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{dual_exact_op, miso_exact_op, Method};
    use crate::config::{DualConfig, MisoConfig};
    use crate::special::Accuracy;

    fn closed(value: f64) -> OpResult {
        OpResult {
            value,
            method: Method::Exact,
            quadrature_error: 0.0,
        }
    }

    #[test]
    fn power_law_slope_is_recovered() {
        let d = diversity_estimate(|t| Ok(closed(0.3 * t.value().powf(2.5))), 1e-3, 1e-2, 6).unwrap();
        assert!((d.slope - 2.5).abs() < 1e-12);
        assert!((d.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(d.fit_range, (1e-3, 1e-2));
    }

    #[test]
    fn single_port_slope_is_one() {
        let cfg = MisoConfig::new(1, 1, 0.5).unwrap();
        let acc = Accuracy::relative(1e-8);
        let d = diversity_estimate(|t| miso_exact_op(&cfg, t, &acc), 1e-3, 1e-2, 8).unwrap();
        assert!((d.slope - 1.0).abs() < 0.05, "{d:?}");
    }

    #[test]
    fn dual_slope_is_port_product() {
        let cfg = DualConfig::new(2, 2, 0.5, 0.5).unwrap();
        let acc = Accuracy::relative(1e-8);
        let d = diversity_estimate(|t| dual_exact_op(&cfg, t, &acc), 1e-3, 1e-2, 8).unwrap();
        assert!((d.slope - 4.0).abs() < 0.3, "{d:?}");
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            diversity_estimate(|_| Ok(closed(0.0)), 1e-3, 1e-2, 5),
            Err(Error::DegenerateFit(_))
        ));
        let noisy = |_: Threshold| {
            Ok(OpResult {
                quadrature_error: 0.5,
                ..closed(1.0)
            })
        };
        assert!(matches!(
            diversity_estimate(noisy, 1e-3, 1e-2, 5),
            Err(Error::DegenerateFit(_))
        ));
        // a constant outage has no slope to speak of
        assert!(matches!(
            diversity_estimate(|_| Ok(closed(0.4)), 1e-3, 1e-2, 5),
            Err(Error::DegenerateFit(_))
        ));
        assert!(diversity_estimate(|_| Ok(closed(0.4)), 1e-2, 1e-3, 5).is_err());
        assert!(diversity_estimate(|_| Ok(closed(0.4)), 1e-3, 1e-2, 3).is_err());
    }
}
