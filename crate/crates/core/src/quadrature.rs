//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature.
//!
//! The interval with the largest error estimate is bisected until the
//! summed estimate meets `max(abs_tol, rel_tol * |integral|)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::special::Accuracy;

#[allow(clippy::excessive_precision)]
const KRONROD_NODES: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

// Gauss weights for the odd-indexed Kronrod nodes (the 10-point rule).
#[allow(clippy::excessive_precision)]
const GAUSS_WEIGHTS: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const KRONROD_WEIGHTS: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod_21<F>(f: &mut F, lo: f64, hi: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center)?;
    let mut kronrod = KRONROD_WEIGHTS[10] * f_center;
    let mut gauss = 0.0;
    let mut abs_sum = kronrod.abs();
    let mut values = [(0.0, 0.0); 10];
    for (j, node) in KRONROD_NODES[..10].iter().enumerate() {
        let dx = half * node;
        let left = f(center - dx)?;
        let right = f(center + dx)?;
        values[j] = (left, right);
        kronrod += KRONROD_WEIGHTS[j] * (left + right);
        abs_sum += KRONROD_WEIGHTS[j] * (left.abs() + right.abs());
        if j % 2 == 1 {
            gauss += GAUSS_WEIGHTS[j / 2] * (left + right);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = KRONROD_WEIGHTS[10] * (f_center - mean).abs();
    for (j, &(left, right)) in values.iter().enumerate() {
        asc += KRONROD_WEIGHTS[j] * ((left - mean).abs() + (right - mean).abs());
    }
    let scale = half.abs();
    let value = kronrod * half;
    let abs_integral = abs_sum * scale;
    let asc = asc * scale;

    // QUADPACK error scaling
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_integral > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_integral);
    }
    if !value.is_finite() {
        return Err(Error::Domain(format!("integrand is not finite on [{lo}, {hi}]")));
    }
    Ok(Segment { lo, hi, value, error })
}

/// Integrates `f` over `[lo, hi]`. The integrand may fail; the first error
/// aborts the integration.
pub fn integrate<F>(mut f: F, lo: f64, hi: f64, acc: &Accuracy) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    if lo == hi {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    let first = gauss_kronrod_21(&mut f, lo, hi)?;
    let mut total = first.value;
    let mut total_error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;
    loop {
        let tolerance = acc.bound(total);
        if total_error <= tolerance {
            break;
        }
        if subdivisions >= acc.max_subdivisions {
            return Err(Error::Quadrature {
                error: total_error,
                tolerance,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds every live segment");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval can no longer be split in f64
            return Err(Error::Quadrature {
                error: total_error,
                tolerance,
                subdivisions,
            });
        }
        let left = gauss_kronrod_21(&mut f, worst.lo, mid)?;
        let right = gauss_kronrod_21(&mut f, mid, worst.hi)?;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
    // re-sum to shed the drift of the running updates
    let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok(Integral {
        value,
        error,
        subdivisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        // Kronrod-21 integrates degree-31 polynomials exactly
        let r = integrate(|x| Ok(x.powi(20) - 3.0 * x.powi(7)), -1.0, 2.0, &Accuracy::default()).unwrap();
        let exact = (2f64.powi(21) + 1.0) / 21.0 - 3.0 * (2f64.powi(8) - 1.0) / 8.0;
        assert!((r.value - exact).abs() < 1e-9 * exact.abs());
    }

    #[test]
    fn sharp_feature_is_resolved() {
        // logistic step of width 1e-4 centred at 0.3
        let f = |x: f64| Ok(1.0 / (1.0 + ((x - 0.3) / 1e-4).exp()));
        let r = integrate(f, 0.0, 1.0, &Accuracy::default()).unwrap();
        assert!((r.value - 0.3).abs() < 1e-10, "{r:?}");
        assert!(r.subdivisions > 1);
    }

    #[test]
    fn exponential_tail() {
        let r = integrate(|x| Ok((-x).exp()), 0.0, 40.0, &Accuracy::default()).unwrap();
        assert!((r.value - (1.0 - (-40.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let acc = Accuracy {
            max_subdivisions: 2,
            ..Accuracy::default()
        };
        let r = integrate(|x: f64| Ok(x.abs().sqrt()), -1.0, 1.0, &acc);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn integrand_errors_propagate() {
        let r = integrate(|_| Err(Error::Domain("boom".into())), 0.0, 1.0, &Accuracy::default());
        assert_eq!(r.unwrap_err(), Error::Domain("boom".into()));
    }
}
