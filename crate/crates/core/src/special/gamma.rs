use std::sync::LazyLock;

use crate::error::{Error, Result};

const ITERATION_LIMIT: usize = 100_000;

// n! is exact in f64 up to 22!.
const EXACT_FACTORIALS: usize = 23;

static LN_FACTORIAL_TABLE: LazyLock<[f64; EXACT_FACTORIALS]> = LazyLock::new(|| {
    let mut table = [0.0; EXACT_FACTORIALS];
    let mut f = 1.0f64;
    for (n, slot) in table.iter_mut().enumerate().skip(1) {
        f *= n as f64;
        *slot = f.ln();
    }
    table
});

/// `ln(n!)`.
///
/// Exact factorials for `n <= 22`, Stirling series with five correction
/// terms above that (truncation error below `1e-17`).
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < EXACT_FACTORIALS {
        return LN_FACTORIAL_TABLE[n as usize];
    }
    let x = n as f64 + 1.0;
    let x2 = x * x;
    let series =
        (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * x2)) / x2) / x2) / x2) / x;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// `e^{-x} x^n / n!`, the Poisson mass at `n`.
pub(crate) fn poisson_mass(n: u64, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    (-x + n as f64 * x.ln() - ln_factorial(n)).exp()
}

/// Both regularized incomplete gamma functions `(P(n, x), Q(n, x))` for an
/// integer shape `n >= 1`.
///
/// The smaller of the two is computed directly (power series below
/// `x = n + 1`, Lentz continued fraction above) and the other as its
/// complement, so each value carries full relative accuracy where it is
/// small.
pub fn regularized_gamma_pair(n: u32, x: f64) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::Domain("incomplete gamma shape must be >= 1".into()));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!(
            "incomplete gamma argument must be >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x == f64::INFINITY {
        return Ok((1.0, 0.0));
    }
    let a = f64::from(n);
    if x < a + 1.0 {
        let p = lower_series(n, x)?;
        Ok((p, 1.0 - p))
    } else {
        let q = upper_continued_fraction(n, x)?;
        Ok((1.0 - q, q))
    }
}

/// `P(n, x) = γ(n, x) / (n-1)!`.
pub fn regularized_lower_gamma(n: u32, x: f64) -> Result<f64> {
    regularized_gamma_pair(n, x).map(|(p, _)| p)
}

/// `Q(n, x) = Γ(n, x) / (n-1)! = 1 - P(n, x)`.
pub fn regularized_upper_gamma(n: u32, x: f64) -> Result<f64> {
    regularized_gamma_pair(n, x).map(|(_, q)| q)
}

// P(n, x) = e^{-x} x^n / n! * sum_k x^k / ((n+1)...(n+k))
fn lower_series(n: u32, x: f64) -> Result<f64> {
    let prefix = poisson_mass(u64::from(n), x);
    if prefix == 0.0 {
        return Ok(0.0);
    }
    let mut denom = f64::from(n);
    let mut term = 1.0;
    let mut sum = 1.0;
    for _ in 0..ITERATION_LIMIT {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term < sum * f64::EPSILON * 0.5 {
            return Ok((prefix * sum).min(1.0));
        }
    }
    Err(Error::Convergence {
        what: "incomplete gamma series",
        terms: ITERATION_LIMIT,
    })
}

// Modified Lentz evaluation of
// Q(n, x) = e^{-x} x^n / (n-1)! * 1/(x+1-n- 1(1-n)/(x+3-n- 2(2-n)/(x+5-n- ...)))
fn upper_continued_fraction(n: u32, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let a = f64::from(n);
    let prefix = (-x + a * x.ln() - ln_factorial(u64::from(n) - 1)).exp();
    if prefix == 0.0 {
        return Ok(0.0);
    }
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..ITERATION_LIMIT {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok((prefix * h).min(1.0));
        }
    }
    Err(Error::Convergence {
        what: "incomplete gamma continued fraction",
        terms: ITERATION_LIMIT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_factorial_matches_exact_products_across_the_switch() {
        let mut f = 1.0f64;
        for n in 1..=40u64 {
            f *= n as f64;
            let err = (ln_factorial(n) - f.ln()).abs();
            assert!(err <= 1e-14 * f.ln().max(1.0), "n={n} err={err}");
        }
        assert_eq!(ln_factorial(0), 0.0);
    }

    #[test]
    fn shape_one_is_exponential_cdf() {
        let p = regularized_lower_gamma(1, std::f64::consts::LN_2).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        for &x in &[1e-8, 0.3, 1.0, 2.0, 7.5, 40.0] {
            let (p, q) = regularized_gamma_pair(1, x).unwrap();
            let exact_q = (-x).exp();
            let exact_p = -(-x).exp_m1();
            assert!((q - exact_q).abs() <= 1e-14 * exact_q, "x={x}");
            assert!((p - exact_p).abs() <= 1e-14 * exact_p, "x={x}");
        }
    }

    #[test]
    fn boundary_values() {
        assert_eq!(regularized_lower_gamma(2, 0.0).unwrap(), 0.0);
        assert_eq!(regularized_lower_gamma(7, f64::INFINITY).unwrap(), 1.0);
        // P(2, 1) = 1 - 2/e
        let p = regularized_lower_gamma(2, 1.0).unwrap();
        assert!((p - (1.0 - 2.0 * (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(regularized_lower_gamma(0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(regularized_lower_gamma(3, -0.1), Err(Error::Domain(_))));
        assert!(matches!(regularized_lower_gamma(3, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn tiny_upper_tail_keeps_relative_accuracy() {
        // Q(1, 600) = e^{-600}
        let q = regularized_upper_gamma(1, 600.0).unwrap();
        assert!(((q / (-600.0f64).exp()) - 1.0).abs() < 1e-12);
        // P(n, x) for x << n is the leading Poisson term to first order
        let p = regularized_lower_gamma(30, 1e-3).unwrap();
        let lead = poisson_mass(30, 1e-3);
        assert!((p / lead - 1.0).abs() < 1e-4);
    }
}
