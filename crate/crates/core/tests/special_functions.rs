mod oracles;

use fas_outage::correlation::jakes_coefficients;
use fas_outage::special::*;
use proptest::prelude::*;

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(1.0)
}

#[test]
fn lower_gamma_against_poisson_tail() {
    let got = regularized_lower_gamma(3, 2.5).unwrap();
    let want = oracles::lower_gamma_poisson_tail(3, 2.5);
    assert!((got - want).abs() < 1e-14, "{got} vs {want}");
}

#[test]
fn bessel_i_against_power_series() {
    let got = bessel_i(2, 3.7).unwrap();
    let want = oracles::bessel_i_series(2, 3.7);
    assert!((got / want - 1.0).abs() < 1e-13, "{got} vs {want}");
}

#[test]
fn scaled_bessel_at_moderate_argument() {
    let got = bessel_i_scaled(1, 10.0).unwrap();
    let want = (-10.0f64).exp() * bessel_i(1, 10.0).unwrap();
    assert!((got / want - 1.0).abs() < 1e-14);
    let series = (-10.0f64).exp() * oracles::bessel_i_series(1, 10.0);
    assert!((got / series - 1.0).abs() < 1e-13);
}

#[test]
fn scaled_bessel_large_argument_is_finite() {
    let v = bessel_i_scaled(0, 700.0).unwrap();
    let asymptotic = 1.0 / (2.0 * std::f64::consts::PI * 700.0).sqrt();
    assert!(v.is_finite() && v > 0.0);
    assert!((v / asymptotic - 1.0).abs() < 1e-3);
}

#[test]
fn j0_against_alternating_series() {
    let got = bessel_j0(1.0).unwrap();
    let want = oracles::bessel_j0_series(1.0);
    assert!((got - want).abs() < 1e-15, "{got} vs {want}");
}

#[test]
fn marcum_against_density_integral() {
    let want = oracles::marcum_q_by_density(2, 1.0, 1.0);
    let got = marcum_q(2, 1.0, 1.0, &Accuracy::default()).unwrap();
    assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    let tight = Accuracy {
        abs_tol: 1e-16,
        rel_tol: 1e-15,
        ..Accuracy::default()
    };
    let got = marcum_q(2, 1.0, 1.0, &tight).unwrap();
    assert!((got - want).abs() < 1e-14, "{got} vs {want}");
}

#[test]
fn jakes_profiles_against_series() {
    let c = jakes_coefficients(2, 0.5).unwrap();
    assert_eq!(c[0], 1.0);
    assert!((c[1] - oracles::bessel_j0_series(std::f64::consts::PI)).abs() < 1e-14);
    assert!((c[1] + 0.3042421776).abs() < 1e-10);
    let c = jakes_coefficients(3, 1.0).unwrap();
    let pi = std::f64::consts::PI;
    for (got, x) in c.iter().zip([0.0, pi, 2.0 * pi]) {
        assert!((got - oracles::bessel_j0_series(x)).abs() < 1e-14);
    }
}

#[test]
fn oracle_gauss_legendre_is_exact_for_polynomials() {
    let v = oracles::gauss_legendre(|x| x.powi(39), 0.0, 1.0, 1);
    assert!((v - 1.0 / 40.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marcum_is_a_probability_with_the_right_monotonicity(
        n in 1u32..6,
        a in 0.0f64..8.0,
        b in 0.0f64..8.0,
        da in 0.01f64..2.0,
        db in 0.01f64..2.0,
    ) {
        let acc = Accuracy::default();
        let q = marcum_q(n, a, b, &acc).unwrap();
        prop_assert!((0.0..=1.0).contains(&q));
        // two evaluations, each within max(abs_tol, rel_tol * q)
        let slack = 2.0 * acc.bound(1.0);
        prop_assert!(marcum_q(n, a + da, b, &acc).unwrap() >= q - slack);
        prop_assert!(marcum_q(n, a, b + db, &acc).unwrap() <= q + slack);
        prop_assert!(marcum_q(n + 1, a, b, &acc).unwrap() >= q - slack);
    }

    #[test]
    fn central_marcum_is_upper_gamma(n in 1u32..12, b in 0.0f64..10.0) {
        let acc = Accuracy::default();
        let q = marcum_q(n, 0.0, b, &acc).unwrap();
        let p = regularized_lower_gamma(n, 0.5 * b * b).unwrap();
        prop_assert!((q - (1.0 - p)).abs() <= acc.abs_tol);
    }

    #[test]
    fn marcum_dominates_central_first_order(n in 1u32..8, b in 0.01f64..10.0, frac in 0.0f64..1.0) {
        let a = frac * b;
        let q = marcum_q(n, a, b, &Accuracy::default()).unwrap();
        prop_assert!(q >= (-0.5 * b * b).exp() - 1e-12);
    }

    #[test]
    fn scaled_bessel_matches_unscaled(nu in 0u32..10, x in 0.0f64..30.0) {
        let scaled = bessel_i_scaled(nu, x).unwrap() * x.exp();
        let plain = bessel_i(nu, x).unwrap();
        prop_assert!(close(scaled, plain, 1e-10));
    }

    #[test]
    fn lower_gamma_matches_simpson(n in 1u32..=10, x in 0.0f64..50.0) {
        let ln_norm: f64 = (1..n).map(|j| f64::from(j).ln()).sum();
        let pdf = |t: f64| {
            if t == 0.0 {
                return if n == 1 { 1.0 } else { 0.0 };
            }
            (f64::from(n - 1) * t.ln() - t - ln_norm).exp()
        };
        let want = oracles::simpson(pdf, 0.0, x, 4000);
        prop_assert!((regularized_lower_gamma(n, x).unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn bessel_recurrence(nu in 1u32..20, x in 1e-3f64..50.0) {
        let lhs = bessel_i(nu - 1, x).unwrap() - bessel_i(nu + 1, x).unwrap();
        let rhs = 2.0 * f64::from(nu) / x * bessel_i(nu, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs() + 1e-300);
    }
}
