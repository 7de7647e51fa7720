use super::gamma::{poisson_mass, regularized_gamma_pair};
use super::{check_finite_nonneg, Accuracy};
use crate::error::{Error, Result};

/// Generalized Marcum Q value together with its complement.
///
/// `q = Q_N(a, b)` is the probability that a noncentral chi-square variable
/// with `2N` degrees of freedom and noncentrality `a²` exceeds `b²`;
/// `p = 1 - q` is its CDF at `b²`. Both are summed from their own series, so
/// whichever is tiny is still relatively accurate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarcumQ {
    pub q: f64,
    pub p: f64,
}

impl MarcumQ {
    /// `ln(1 - Q)`, taken from whichever representation is accurate.
    pub fn ln_p(&self) -> f64 {
        if self.q < 0.5 {
            (-self.q).ln_1p()
        } else {
            self.p.ln()
        }
    }
}

/// `Q_N(a, b)`.
pub fn marcum_q(order: u32, a: f64, b: f64, acc: &Accuracy) -> Result<f64> {
    marcum_q_pair(order, a, b, acc).map(|m| m.q)
}

/// `Q_N(a, b)` and `1 - Q_N(a, b)` as a Poisson mixture of gamma tails:
///
/// ```text
/// Q_N(a, b) = Σ_k e^{-λ} λ^k / k! · Q(N + k, y),   λ = a²/2, y = b²/2
/// ```
///
/// The sum starts at the Poisson mode and walks outward in both directions.
/// A direction stops once the geometric bound on its remaining Poisson mass,
/// weighted by the monotone gamma factor, is below
/// `max(abs_tol, rel_tol * sum)` for both partial sums. With a tiny
/// `abs_tol` (see [`Accuracy::relative`]) a tiny `p` keeps its leading digits.
pub fn marcum_q_pair(order: u32, a: f64, b: f64, acc: &Accuracy) -> Result<MarcumQ> {
    if order < 1 {
        return Err(Error::Domain("Marcum Q order must be >= 1".into()));
    }
    check_finite_nonneg("a", a)?;
    check_finite_nonneg("b", b)?;
    if b == 0.0 {
        return Ok(MarcumQ { q: 1.0, p: 0.0 });
    }
    let lambda = 0.5 * a * a;
    let y = 0.5 * b * b;
    if lambda == 0.0 {
        let (p, q) = regularized_gamma_pair(order, y)?;
        return Ok(MarcumQ { q, p });
    }

    let mode = lambda.floor() as u64;
    let mode_weight = poisson_mass(mode, lambda);
    let shape = |k: u64| -> Result<u32> {
        u32::try_from(u64::from(order) + k).map_err(|_| Error::Domain("Marcum Q order overflow".into()))
    };

    let mut q = 0.0;
    let mut p = 0.0;
    let mut terms = 0usize;

    // upward: k = mode, mode+1, ...; gamma upper tail increases with k
    let mut k = mode;
    let mut w = mode_weight;
    loop {
        let (pk, qk) = regularized_gamma_pair(shape(k)?, y)?;
        q += w * qk;
        p += w * pk;
        terms += 1;
        let next = w * lambda / (k as f64 + 1.0);
        let ratio = lambda / (k as f64 + 2.0);
        let tail = if ratio < 1.0 {
            next / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        if tail == 0.0 || (tail <= acc.bound(q) && tail * pk <= acc.bound(p)) {
            break;
        }
        if terms >= acc.max_terms {
            return Err(Error::Convergence {
                what: "Marcum Q series",
                terms,
            });
        }
        w = next;
        k += 1;
    }

    // downward: k = mode-1, ..., 0; gamma lower tail increases as k falls
    let mut k = mode;
    let mut w = mode_weight;
    while k > 0 {
        w *= k as f64 / lambda;
        k -= 1;
        let (pk, qk) = regularized_gamma_pair(shape(k)?, y)?;
        q += w * qk;
        p += w * pk;
        terms += 1;
        if k == 0 {
            break;
        }
        let next = w * k as f64 / lambda;
        let ratio = (k as f64 - 1.0) / lambda;
        let tail = next / (1.0 - ratio);
        if tail == 0.0 || (tail * qk <= acc.bound(q) && tail <= acc.bound(p)) {
            break;
        }
        if terms >= acc.max_terms {
            return Err(Error::Convergence {
                what: "Marcum Q series",
                terms,
            });
        }
    }

    Ok(MarcumQ {
        q: q.clamp(0.0, 1.0),
        p: p.clamp(0.0, 1.0),
    })
}
