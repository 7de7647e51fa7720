//! `selftest` subcommand: fast invariant checks across the library.

use fas_outage::analytic::{
    diversity_estimate, dual_exact_op, dual_op_lower, dual_op_upper, miso_exact_op, miso_op_lower, miso_op_upper,
    BoundVariant,
};
use fas_outage::monte_carlo::estimate_op_miso;
use fas_outage::special::{marcum_q, regularized_lower_gamma, regularized_upper_gamma, Accuracy};
use fas_outage::{DualConfig, MisoConfig, Threshold};

use crate::compare::tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict} {}: {}", self.name, self.detail)
    }
}

type Outcome = fas_outage::Result<(bool, String)>;
type CheckFn = fn() -> Outcome;

fn th(v: f64) -> Threshold {
    Threshold::linear(v).expect("positive threshold")
}

fn central_marcum() -> Outcome {
    let acc = Accuracy::default();
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        for b in [0.3, 1.0, 2.5, 5.0] {
            let q = marcum_q(n, 0.0, b, &acc)?;
            worst = worst.max((q - regularized_upper_gamma(n, 0.5 * b * b)?).abs());
        }
    }
    Ok((worst <= 1e-12, format!("max |Q_N(0,b) - Q(N,b²/2)| = {worst:.2e}")))
}

fn single_port_miso() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [1, 2, 4] {
        for g in [0.1, 1.0, 4.0] {
            let cfg = MisoConfig::new(n, 1, 0.9)?;
            let ex = miso_exact_op(&cfg, th(g), &Accuracy::default())?.value;
            worst = worst.max((ex - regularized_lower_gamma(n, g)?).abs());
        }
    }
    Ok((worst <= 1e-9, format!("max |OP - P(N, γ)| = {worst:.2e}")))
}

fn dual_reductions() -> Outcome {
    let acc = Accuracy::default();
    let mut worst: f64 = 0.0;
    for g in [0.1, 1.0, 4.0] {
        let one = dual_exact_op(&DualConfig::new(1, 1, 0.5, 0.5)?, th(g), &acc)?.value;
        worst = worst.max((one + (-g).exp_m1()).abs());
        for m in [2, 5] {
            let d = dual_exact_op(&DualConfig::new(1, m, 0.8, 0.3)?, th(g), &acc)?.value;
            let s = miso_exact_op(&MisoConfig::new(1, m, 0.8)?, th(g), &acc)?.value;
            worst = worst.max((d - s).abs());
        }
    }
    Ok((worst <= 1e-9, format!("max deviation {worst:.2e}")))
}

fn sandwich() -> Outcome {
    let acc = Accuracy::default();
    let mut violations = 0;
    let mut points = 0;
    for rho in [0.0, 0.5, 0.9, 0.99] {
        for g in [0.1, 1.0, 4.0] {
            for m in [1, 2, 5] {
                for n in [1, 2] {
                    let cfg = MisoConfig::new(n, m, rho)?;
                    let ex = miso_exact_op(&cfg, th(g), &acc)?.value;
                    let lo = miso_op_lower(&cfg, th(g))?.value;
                    for v in [BoundVariant::AsPrinted, BoundVariant::AsDerived] {
                        let up = miso_op_upper(&cfg, th(g), v)?.value;
                        violations += usize::from(!(lo <= ex + 1e-9 && ex <= up + 1e-9));
                        points += 1;
                    }
                }
                let cfg = DualConfig::new(2, m, rho, rho)?;
                let ex = dual_exact_op(&cfg, th(g), &acc)?.value;
                let (lo, up) = (dual_op_lower(&cfg, th(g))?.value, dual_op_upper(&cfg, th(g))?.value);
                violations += usize::from(!(lo <= ex + 1e-9 && ex <= up + 1e-9));
                points += 1;
            }
        }
    }
    Ok((violations == 0, format!("{violations} violations in {points} points")))
}

fn monotone_in_ports() -> Outcome {
    let acc = Accuracy::default();
    let mut prev = 1.0;
    let mut ok = true;
    for m in 1..=20 {
        let v = miso_exact_op(&MisoConfig::new(2, m, 0.95)?, th(1.0), &acc)?.value;
        ok &= v <= prev + 1e-12;
        prev = v;
    }
    Ok((ok, format!("OP(N=2, M=20, ρ=0.95, γ=1) = {prev:.6}")))
}

fn simulation_agrees() -> Outcome {
    let mut worst_ratio: f64 = 0.0;
    for (n, m, rho, g) in [(1, 5, 0.9, 1.0), (2, 10, 0.99, 2.0)] {
        let cfg = MisoConfig::new(n, m, rho)?;
        let ex = miso_exact_op(&cfg, th(g), &Accuracy::default())?.value;
        let mc = estimate_op_miso(&cfg, th(g), 100_000, 17)?;
        worst_ratio = worst_ratio.max((ex - mc.p_hat).abs() / tolerance(&mc));
    }
    Ok((
        worst_ratio <= 1.0,
        format!("worst |exact - mc| / tolerance = {worst_ratio:.3}"),
    ))
}

fn dual_diversity() -> Outcome {
    let cfg = DualConfig::new(2, 2, 0.5, 0.5)?;
    let acc = Accuracy::relative(1e-8);
    let d = diversity_estimate(|t| dual_exact_op(&cfg, t, &acc), 1e-3, 1e-2, 8)?;
    Ok((
        (d.slope - 4.0).abs() <= 0.3,
        format!("slope {:.3} for M_T = M_R = 2", d.slope),
    ))
}

/// Run every check; a numerical error counts as a failure.
pub fn run_selftest() -> Vec<Check> {
    let checks: [(&'static str, CheckFn); 7] = [
        ("central marcum equals upper gamma", central_marcum),
        ("single-port miso is a gamma cdf", single_port_miso),
        ("dual special cases", dual_reductions),
        ("bounds sandwich exact", sandwich),
        ("outage nonincreasing in ports", monotone_in_ports),
        ("exact agrees with simulation", simulation_agrees),
        ("dual diversity order", dual_diversity),
    ];
    checks
        .iter()
        .map(|&(name, f)| match f() {
            Ok((passed, detail)) => Check { name, passed, detail },
            Err(e) => Check {
                name,
                passed: false,
                detail: e.to_string(),
            },
        })
        .collect()
}
