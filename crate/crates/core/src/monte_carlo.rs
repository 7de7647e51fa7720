//! Seeded Monte Carlo estimation of outage probability.
//!
//! Channels are drawn from the common-component parameterizations of the two
//! models. Trials are split into chunks of [`CHUNK_TRIALS`]; chunk `c` runs a
//! ChaCha8 generator keyed by `seed` on stream `c`, so results depend only on
//! `(seed, trials)` and not on the thread count.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{DualConfig, MisoConfig, Threshold};
use crate::correlation::jakes_coefficients;
use crate::error::{Error, Result};

/// Trials per independently seeded chunk.
pub const CHUNK_TRIALS: u64 = 1 << 16;

/// Generator and Gaussian method, for output metadata.
pub const RNG_DESCRIPTION: &str = "ChaCha8 (key = seed, stream = chunk index), ziggurat normals";

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Empirical outage probability with its 95% Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub trials: u64,
    pub outages: u64,
    pub p_hat: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub seed: u64,
}

impl McEstimate {
    pub fn from_counts(outages: u64, trials: u64, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::invalid("trials", "must be at least 1"));
        }
        if outages > trials {
            return Err(Error::invalid("outages", "cannot exceed trials"));
        }
        let p_hat = outages as f64 / trials as f64;
        let (lo, hi) = wilson_interval(outages, trials);
        Ok(McEstimate {
            trials,
            outages,
            p_hat,
            ci95_low: lo.min(p_hat),
            ci95_high: hi.max(p_hat),
            seed,
        })
    }

    /// Larger distance from `p_hat` to an interval endpoint.
    pub fn half_width(&self) -> f64 {
        (self.p_hat - self.ci95_low).max(self.ci95_high - self.p_hat)
    }
}

/// 95% Wilson score interval for `outages` successes in `trials`.
pub fn wilson_interval(outages: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = outages as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // the endpoints are exactly 0 and 1 at the extremes; rounding would leave dust
    let lo = if outages == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if outages == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// Index and value of the largest gain; the lowest index wins ties.
pub fn select_port(gains: &[f64]) -> (usize, f64) {
    let mut best = (0, gains[0]);
    for (i, &g) in gains.iter().enumerate().skip(1) {
        if g > best.1 {
            best = (i, g);
        }
    }
    best
}

// One N(0, 1/2) variate.
#[inline]
fn half_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    z * FRAC_1_SQRT_2
}

#[inline]
fn complex_half<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let re = half_normal(rng);
    (re, half_normal(rng))
}

// Writes X_m / σ² into `out` (length M). Draw order: (x_0n, y_0n) for every
// n, then (x_mn, y_mn) for m = 2..M and every n.
fn miso_unit_gains<R: Rng + ?Sized>(cfg: &MisoConfig, rng: &mut R, common: &mut [(f64, f64)], out: &mut [f64]) {
    let rho = cfg.rho;
    let innov = (1.0 - rho * rho).sqrt();
    let mut first = 0.0;
    for c in common.iter_mut() {
        *c = complex_half(rng);
        first += c.0 * c.0 + c.1 * c.1;
    }
    out[0] = first;
    for slot in out.iter_mut().skip(1) {
        let mut x = 0.0;
        for &(cr, ci) in common.iter() {
            let (xr, xi) = complex_half(rng);
            let re = innov * xr + rho * cr;
            let im = innov * xi + rho * ci;
            x += re * re + im * im;
        }
        *slot = x;
    }
}

/// Per-port MRT gains `X_m = Σ_n |h_mn|²`, `m = 1..M`.
///
/// Port 1 carries the common component itself; every other port mixes it
/// with an independent innovation, `h_mn = σ(√(1-ρ²) w_mn + ρ w_0n)`.
pub fn sample_miso_gain<R: Rng + ?Sized>(cfg: &MisoConfig, rng: &mut R) -> Vec<f64> {
    let mut common = vec![(0.0, 0.0); cfg.n_antennas as usize];
    let mut out = vec![0.0; cfg.m_ports as usize];
    miso_unit_gains(cfg, rng, &mut common, &mut out);
    out.iter_mut().for_each(|x| *x *= cfg.sigma2);
    out
}

// Unit-variance complex coefficients, column-major (index j * m_r + i).
// Draw order: z_0, z_i1 (i = 2..M_R), z_1j (j = 2..M_T), z_ij (j-major).
fn dual_unit_channel<R: Rng + ?Sized>(cfg: &DualConfig, rng: &mut R, out: &mut [(f64, f64)]) {
    let m_r = cfg.m_r as usize;
    let m_t = cfg.m_t as usize;
    let z0 = complex_half(rng);
    out[0] = z0;
    let mix = |rho: f64, z: (f64, f64)| {
        let innov = (1.0 - rho * rho).sqrt();
        (innov * z.0 + rho * z0.0, innov * z.1 + rho * z0.1)
    };
    for h in &mut out[1..m_r] {
        *h = mix(cfg.rho1, complex_half(rng));
    }
    for j in 1..m_t {
        out[j * m_r] = mix(cfg.rho2, complex_half(rng));
    }
    let both = cfg.rho1 * cfg.rho2;
    for j in 1..m_t {
        for i in 1..m_r {
            out[j * m_r + i] = mix(both, complex_half(rng));
        }
    }
}

/// Squared magnitudes `|h_ij|²` as an `M_R × M_T` matrix.
pub fn sample_dual_gain<R: Rng + ?Sized>(cfg: &DualConfig, rng: &mut R) -> DMatrix<f64> {
    let mut h = vec![(0.0, 0.0); cfg.pairs()];
    dual_unit_channel(cfg, rng, &mut h);
    DMatrix::from_iterator(
        cfg.m_r as usize,
        cfg.m_t as usize,
        h.iter().map(|&(re, im)| cfg.sigma2 * (re * re + im * im)),
    )
}

// Per-port Jakes mixing, unit variance: h_1 = z_0, h_i = √(1-ρ_i²) z_i + ρ_i z_0.
fn rx_siso_unit_gains<R: Rng + ?Sized>(rho: &[f64], rng: &mut R, out: &mut [f64]) {
    let z0 = complex_half(rng);
    out[0] = z0.0 * z0.0 + z0.1 * z0.1;
    for (slot, &r) in out.iter_mut().zip(rho).skip(1) {
        let innov = (1.0 - r * r).sqrt();
        let (zr, zi) = complex_half(rng);
        let re = innov * zr + r * z0.0;
        let im = innov * zi + r * z0.1;
        *slot = re * re + im * im;
    }
}

/// Receive-port gains `|h_i|²` of a single-antenna transmitter and an
/// `M_R`-port receiver with per-port correlation `rho[i]` to port 1.
pub fn sample_rx_siso_gain<R: Rng + ?Sized>(rho: &[f64], sigma2: f64, rng: &mut R) -> Vec<f64> {
    let mut out = vec![0.0; rho.len()];
    rx_siso_unit_gains(rho, rng, &mut out);
    out.iter_mut().for_each(|x| *x *= sigma2);
    out
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    Ok(())
}

/// Runs `trials` draws of the normalized selected gain and counts, for each
/// threshold, how many fall below it. `make` builds per-chunk scratch state.
fn estimate<S, M, G>(thresholds: &[Threshold], trials: u64, seed: u64, make: M, gain: G) -> Result<Vec<McEstimate>>
where
    M: Fn() -> S + Sync,
    G: Fn(&mut S, &mut ChaCha8Rng) -> f64 + Sync,
{
    check_trials(trials)?;
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let ths: Vec<f64> = thresholds.iter().map(|t| t.value()).collect();
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut scratch = make();
            let n = CHUNK_TRIALS.min(trials - c * CHUNK_TRIALS);
            let mut counts = vec![0u64; ths.len()];
            for _ in 0..n {
                let g = gain(&mut scratch, &mut rng);
                for (count, &th) in counts.iter_mut().zip(&ths) {
                    *count += u64::from(g < th);
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; ths.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    counts
        .into_iter()
        .map(|outages| McEstimate::from_counts(outages, trials, seed))
        .collect()
}

/// Empirical MISO-FAS outage probability at one threshold.
pub fn estimate_op_miso(cfg: &MisoConfig, th: Threshold, trials: u64, seed: u64) -> Result<McEstimate> {
    estimate_op_miso_multi(cfg, &[th], trials, seed).map(|v| v[0])
}

/// MISO-FAS estimates at several thresholds from one shared sample set.
/// Entry `k` equals `estimate_op_miso(cfg, thresholds[k], trials, seed)`.
pub fn estimate_op_miso_multi(
    cfg: &MisoConfig,
    thresholds: &[Threshold],
    trials: u64,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    cfg.validate()?;
    let n = cfg.n_antennas as usize;
    let m = cfg.m_ports as usize;
    estimate(
        thresholds,
        trials,
        seed,
        || (vec![(0.0, 0.0); n], vec![0.0; m]),
        |(common, gains), rng| {
            miso_unit_gains(cfg, rng, common, gains);
            select_port(gains).1
        },
    )
}

/// Empirical Dual-FAS outage probability (best of all port pairs).
pub fn estimate_op_dual(cfg: &DualConfig, th: Threshold, trials: u64, seed: u64) -> Result<McEstimate> {
    estimate_op_dual_multi(cfg, &[th], trials, seed).map(|v| v[0])
}

pub fn estimate_op_dual_multi(
    cfg: &DualConfig,
    thresholds: &[Threshold],
    trials: u64,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    cfg.validate()?;
    let pairs = cfg.pairs();
    estimate(
        thresholds,
        trials,
        seed,
        || (vec![(0.0, 0.0); pairs], vec![0.0; pairs]),
        |(h, gains), rng| {
            dual_unit_channel(cfg, rng, h);
            for (g, &(re, im)) in gains.iter_mut().zip(h.iter()) {
                *g = re * re + im * im;
            }
            select_port(gains).1
        },
    )
}

/// Empirical outage of a single-antenna link into an `m_r`-port receiver
/// spread over `w` wavelengths (Jakes profile).
pub fn estimate_op_rx_siso(m_r: usize, w: f64, th: Threshold, trials: u64, seed: u64) -> Result<McEstimate> {
    estimate_op_rx_siso_multi(m_r, w, &[th], trials, seed).map(|v| v[0])
}

pub fn estimate_op_rx_siso_multi(
    m_r: usize,
    w: f64,
    thresholds: &[Threshold],
    trials: u64,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    let rho = jakes_coefficients(m_r, w)?;
    estimate(
        thresholds,
        trials,
        seed,
        || vec![0.0; m_r],
        |gains, rng| {
            rx_siso_unit_gains(&rho, rng, gains);
            select_port(gains).1
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::regularized_lower_gamma;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn mean_and_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    fn correlation(a: &[f64], b: &[f64]) -> f64 {
        let (ma, _) = mean_and_se(a);
        let (mb, _) = mean_and_se(b);
        let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        cov / (va * vb).sqrt()
    }

    // Kolmogorov-Smirnov statistic of `xs` against `cdf`.
    fn ks_statistic(xs: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    // 1% critical value of the one-sample KS statistic, large-sample form.
    fn ks_critical(n: usize) -> f64 {
        1.6276 / (n as f64).sqrt()
    }

    #[test]
    fn wilson_interval_brackets_estimate() {
        let e = McEstimate::from_counts(0, 1000, 1).unwrap();
        assert_eq!(e.ci95_low, 0.0);
        assert!(e.ci95_high > 0.0 && e.ci95_high < 0.01);
        let e = McEstimate::from_counts(500, 1000, 1).unwrap();
        assert!((e.ci95_low - 0.4691).abs() < 1e-3 && (e.ci95_high - 0.5309).abs() < 1e-3);
        assert!(McEstimate::from_counts(1, 0, 1).is_err());
    }

    #[test]
    fn tie_goes_to_lowest_index() {
        assert_eq!(select_port(&[1.0, 3.0, 3.0, 2.0]), (1, 3.0));
        assert_eq!(select_port(&[2.0]), (0, 2.0));
    }

    #[test]
    fn single_port_gain_is_exponential() {
        let cfg = MisoConfig::new(1, 1, 0.3).unwrap();
        let mut r = rng(7);
        let xs: Vec<f64> = (0..200_000).map(|_| sample_miso_gain(&cfg, &mut r)[0]).collect();
        let (mean, se) = mean_and_se(&xs);
        assert!((mean - 1.0).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn two_antenna_gain_mean_is_two_sigma2() {
        let cfg = MisoConfig::new(2, 1, 0.0).unwrap().with_sigma2(1.7).unwrap();
        let mut r = rng(8);
        let xs: Vec<f64> = (0..1_000_000).map(|_| sample_miso_gain(&cfg, &mut r)[0]).collect();
        let (mean, se) = mean_and_se(&xs);
        assert!((mean - 3.4).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn miso_marginals_are_gamma() {
        let cfg = MisoConfig::new(3, 4, 0.8).unwrap().with_sigma2(2.0).unwrap();
        let mut r = rng(9);
        let draws: Vec<Vec<f64>> = (0..100_000).map(|_| sample_miso_gain(&cfg, &mut r)).collect();
        for m in 0..4 {
            let mut xs: Vec<f64> = draws.iter().map(|d| d[m]).collect();
            let d = ks_statistic(&mut xs, |x| regularized_lower_gamma(3, x / 2.0).unwrap());
            assert!(d < ks_critical(xs.len()), "port {m}: D = {d}");
        }
    }

    #[test]
    fn miso_power_correlation_is_rho_squared() {
        let rho = 0.7;
        let cfg = MisoConfig::new(1, 2, rho).unwrap();
        let mut r = rng(10);
        let n = 1_000_000;
        let (a, b): (Vec<f64>, Vec<f64>) = (0..n)
            .map(|_| {
                let g = sample_miso_gain(&cfg, &mut r);
                (g[0], g[1])
            })
            .unzip();
        let c = correlation(&a, &b);
        let target: f64 = rho * rho;
        // standard error of a sample correlation coefficient
        let se = (1.0 - target * target) / (n as f64).sqrt();
        assert!((c - target).abs() < 3.0 * se, "corr {c}");
    }

    #[test]
    fn independent_ports_are_uncorrelated() {
        let cfg = MisoConfig::new(2, 3, 0.0).unwrap();
        let mut r = rng(11);
        let n = 200_000;
        let (a, b): (Vec<f64>, Vec<f64>) = (0..n)
            .map(|_| {
                let g = sample_miso_gain(&cfg, &mut r);
                (g[1], g[2])
            })
            .unzip();
        assert!(correlation(&a, &b).abs() < 3.0 / (n as f64).sqrt());
    }

    #[test]
    fn dual_marginals_are_exponential() {
        let cfg = DualConfig::new(3, 2, 0.9, 0.6).unwrap().with_sigma2(0.5).unwrap();
        let mut r = rng(12);
        let draws: Vec<DMatrix<f64>> = (0..100_000).map(|_| sample_dual_gain(&cfg, &mut r)).collect();
        assert_eq!(draws[0].shape(), (2, 3));
        for i in 0..2 {
            for j in 0..3 {
                let mut xs: Vec<f64> = draws.iter().map(|d| d[(i, j)]).collect();
                let d = ks_statistic(&mut xs, |x| -(-x / 0.5).exp_m1());
                assert!(d < ks_critical(xs.len()), "({i},{j}): D = {d}");
            }
        }
    }

    #[test]
    fn dual_diagonal_amplitude_correlation() {
        let cfg = DualConfig::new(2, 2, 0.9, 0.8).unwrap();
        let mut r = rng(13);
        let n = 1_000_000;
        let mut h = vec![(0.0, 0.0); 4];
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            dual_unit_channel(&cfg, &mut r, &mut h);
            // Re E[h11 conj(h22)] / σ²; h22 sits at j * m_r + i = 3
            let v = h[0].0 * h[3].0 + h[0].1 * h[3].1;
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / n as f64;
        let se = ((sum_sq / n as f64 - mean * mean) / n as f64).sqrt();
        assert!((mean - 0.72).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn estimates_are_deterministic_and_seed_sensitive() {
        let cfg = MisoConfig::new(2, 5, 0.9).unwrap();
        let th = Threshold::linear(1.0).unwrap();
        let a = estimate_op_miso(&cfg, th, 200_000, 42).unwrap();
        let b = estimate_op_miso(&cfg, th, 200_000, 42).unwrap();
        let c = estimate_op_miso(&cfg, th, 200_000, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.outages, c.outages);
    }

    #[test]
    fn multi_threshold_matches_single() {
        let cfg = DualConfig::new(2, 3, 0.5, 0.9).unwrap();
        let ths: Vec<Threshold> = [0.2, 1.0, 3.0].iter().map(|&v| Threshold::linear(v).unwrap()).collect();
        let multi = estimate_op_dual_multi(&cfg, &ths, 100_000, 5).unwrap();
        for (k, th) in ths.iter().enumerate() {
            assert_eq!(multi[k], estimate_op_dual(&cfg, *th, 100_000, 5).unwrap());
        }
        assert!(multi.windows(2).all(|w| w[0].outages <= w[1].outages));
    }

    #[test]
    fn exponential_median_threshold() {
        let th = Threshold::linear(std::f64::consts::LN_2).unwrap();
        let e = estimate_op_miso(&MisoConfig::new(1, 1, 0.0).unwrap(), th, 1_000_000, 3).unwrap();
        assert!(e.ci95_low - 0.002 < 0.5 && 0.5 < e.ci95_high + 0.002, "{e:?}");
        let e = estimate_op_dual(&DualConfig::new(1, 1, 0.0, 0.0).unwrap(), th, 1_000_000, 3).unwrap();
        assert!((e.p_hat - 0.5).abs() < 3.0 * e.half_width(), "{e:?}");
    }

    #[test]
    fn tiny_threshold_never_outages() {
        let th = Threshold::linear(1e-12).unwrap();
        let e = estimate_op_miso(&MisoConfig::new(2, 3, 0.5).unwrap(), th, 100_000, 1).unwrap();
        assert_eq!(e.outages, 0);
    }

    #[test]
    fn independent_dual_is_selection_combining() {
        let th = Threshold::linear(1.0).unwrap();
        let e = estimate_op_dual(&DualConfig::new(2, 3, 0.0, 0.0).unwrap(), th, 1_000_000, 17).unwrap();
        let exact = (1.0 - (-1.0f64).exp()).powi(6);
        assert!((e.p_hat - exact).abs() < 3.0 * e.half_width(), "{e:?} vs {exact}");
    }

    #[test]
    fn extra_port_never_hurts() {
        let th = Threshold::linear(1.0).unwrap();
        let mut prev: Option<McEstimate> = None;
        for m in 1..=6 {
            let e = estimate_op_miso(&MisoConfig::new(2, m, 0.8).unwrap(), th, 200_000, 21).unwrap();
            if let Some(p) = prev {
                assert!(e.p_hat <= p.p_hat + 3.0 * p.half_width(), "M={m}");
            }
            prev = Some(e);
        }
    }

    #[test]
    fn zero_trials_rejected() {
        let th = Threshold::linear(1.0).unwrap();
        assert!(estimate_op_miso(&MisoConfig::new(1, 1, 0.0).unwrap(), th, 0, 1).is_err());
    }
}
