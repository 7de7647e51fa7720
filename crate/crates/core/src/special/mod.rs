//! Scalar special functions used by every analytic outage formula.
//!
//! All functions here are pure and thread-safe. Integer orders only: the
//! outage expressions never need anything else.

mod bessel;
mod gamma;
mod marcum;

pub use bessel::{bessel_i, bessel_i_scaled, bessel_j0};
pub use gamma::{ln_factorial, regularized_gamma_pair, regularized_lower_gamma, regularized_upper_gamma};
pub use marcum::{marcum_q, marcum_q_pair, MarcumQ};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances shared by the series kernels and the adaptive quadrature.
///
/// A computation stops once its error estimate is below
/// `max(abs_tol, rel_tol * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Accuracy {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Term budget for series and continued fractions.
    pub max_terms: usize,
    /// Interval budget for adaptive quadrature.
    pub max_subdivisions: usize,
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_terms: 10_000,
            max_subdivisions: 2_000,
        }
    }
}

impl Accuracy {
    /// Relative-only accuracy, for values that may be far below `1e-12`
    /// (deep outage tails in diversity fits).
    pub fn relative(rel_tol: f64) -> Self {
        Accuracy {
            abs_tol: f64::MIN_POSITIVE,
            rel_tol,
            ..Accuracy::default()
        }
    }

    /// `max(abs_tol, rel_tol * |value|)`.
    pub fn bound(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::invalid("abs_tol", "must be positive"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::invalid("rel_tol", "must be positive"));
        }
        if self.max_terms < 1 {
            return Err(Error::invalid("max_terms", "must be at least 1"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::invalid("max_subdivisions", "must be at least 1"));
        }
        Ok(())
    }
}

fn check_finite_nonneg(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("{name} must be finite and >= 0, got {x}")));
    }
    Ok(())
}
