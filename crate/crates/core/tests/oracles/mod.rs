//! Reference evaluations built from routes the library does not use:
//! direct power series, Poisson tail sums, Gauss–Legendre panels on density
//! integrals, and periodic trapezoid sums. Slow and narrow in range, which is
//! fine for tests.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::OnceLock;

fn ln_fact(k: u32) -> f64 {
    (1..=k).map(|j| f64::from(j).ln()).sum()
}

/// `I_ν(x)` by its power series `Σ (x/2)^{2k+ν} / (k! (k+ν)!)`.
pub fn bessel_i_series(nu: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let mut term = (f64::from(nu) * half.ln() - ln_fact(nu)).exp();
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= half * half / (f64::from(k) * f64::from(k + nu));
        sum += term;
        if term < 1e-17 * sum && f64::from(k) > half {
            return sum;
        }
    }
}

/// `J_0(x)` by the alternating series; trustworthy for `|x| <= 12`.
pub fn bessel_j0_series(x: f64) -> f64 {
    assert!(x.abs() <= 12.0, "alternating series loses digits beyond |x| = 12");
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / f64::from(k * k);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// `P(n, x) = Σ_{k>=n} e^{-x} x^k / k!`.
pub fn lower_gamma_poisson_tail(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut k = n;
    let mut sum = 0.0;
    loop {
        let term = (-x + f64::from(k) * x.ln() - ln_fact(k)).exp();
        sum += term;
        if f64::from(k) > x && term < 1e-18 * sum.max(1e-300) {
            return sum;
        }
        k += 1;
    }
}

/// Composite Simpson rule with `panels` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    assert!(panels % 2 == 0);
    let h = (hi - lo) / panels as f64;
    let mut sum = f(lo) + f(hi);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(lo + h * i as f64);
    }
    sum * h / 3.0
}

/// 20-point Gauss–Legendre nodes and weights on `[-1, 1]`, found by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre_20() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = 20;
        let mut rule = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        rule
    })
}

/// Composite 20-point Gauss–Legendre over `panels` equal pieces.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    let width = (hi - lo) / panels as f64;
    let rule = gauss_legendre_20();
    (0..panels)
        .map(|p| {
            let a = lo + width * p as f64;
            let mid = a + 0.5 * width;
            rule.iter().map(|&(x, w)| w * f(mid + 0.5 * width * x)).sum::<f64>() * 0.5 * width
        })
        .sum()
}

/// `Q_N(a, b)` by integrating the generalized Rice density
/// `r (r/a)^{N-1} e^{-(r²+a²)/2} I_{N-1}(a r)` from `b` outward.
/// The factor `(r/a)^{N-1} I_{N-1}(ar)` is summed as a series in `a²` so that
/// `a = 0` needs no special case. Suited to `a, b <= 15`.
pub fn marcum_q_by_density(order: u32, a: f64, b: f64) -> f64 {
    let nu = order - 1;
    let density = |r: f64| {
        // Σ_k r^{2ν+2k} a^{2k} / (2^{2k+ν} k! (k+ν)!)
        let mut term = (f64::from(2 * nu) * r.ln() - f64::from(nu) * 2f64.ln() - ln_fact(nu)).exp();
        if r == 0.0 {
            term = if nu == 0 { 1.0 } else { 0.0 };
        }
        let mut sum = term;
        let q = 0.25 * a * a * r * r;
        let mut k = 0u32;
        if q > 0.0 {
            loop {
                k += 1;
                term *= q / (f64::from(k) * f64::from(k + nu));
                sum += term;
                if term < 1e-18 * sum && f64::from(k) * f64::from(k) > q {
                    break;
                }
            }
        }
        r * sum * (-0.5 * (r * r + a * a)).exp()
    };
    let hi = a.max(b) + 14.0;
    let panels = ((hi - b) / 0.25).ceil().max(1.0) as usize;
    gauss_legendre(density, b, hi, panels)
}

/// Joint density of two Rayleigh amplitudes with complex correlation `rho`
/// and `E|h|² = s2`, by the periodic trapezoid rule over the phase
/// difference.
pub fn bivariate_rayleigh(r1: f64, r2: f64, rho: f64, s2: f64) -> f64 {
    let d = s2 * (1.0 - rho * rho);
    let n = 400;
    let mean: f64 = (0..n)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / n as f64;
            (-(r1 * r1 + r2 * r2 - 2.0 * rho * r1 * r2 * phi.cos()) / d).exp()
        })
        .sum::<f64>()
        / n as f64;
    4.0 * r1 * r2 / (s2 * d) * mean
}

/// Joint CDF `P(X_1 <= z1, X_2 <= z2)` of two single-antenna MISO-FAS port
/// gains (unit σ²), by Gauss–Legendre over the reference gain with the
/// conditional CDF from [`marcum_q_by_density`].
pub fn miso_pair_cdf(rho: f64, z1: f64, z2: f64) -> f64 {
    let s = 1.0 - rho * rho;
    let b = (2.0 * z2 / s).sqrt();
    gauss_legendre(
        |t| (-t).exp() * (1.0 - marcum_q_by_density(1, (2.0 * rho * rho * t / s).sqrt(), b)),
        0.0,
        z1,
        8,
    )
}
