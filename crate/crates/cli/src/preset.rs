//! Sweeps behind the published outage figures.
//!
//! Where a caption leaves a parameter open, the preset picks one and says so
//! in a `chosen` metadata line of the CSV.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use fas_outage::analytic::BoundVariant;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::spec::{Model, SweepMethod, SweepSpec, ThresholdUnit, DEFAULT_TRIALS};
use crate::sweep::{Evaluation, SweepTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
        Preset::Fig7,
        Preset::Fig8,
        Preset::Fig9,
        Preset::Fig10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Fig8 => "fig8",
            Preset::Fig9 => "fig9",
            Preset::Fig10 => "fig10",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| CliError::config("preset", format!("unknown preset `{s}` (expected fig3 to fig10)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PresetOptions {
    pub trials: u64,
    /// Add a Monte Carlo column next to the analytic ones.
    pub mc: bool,
    pub seed: u64,
}

impl Default for PresetOptions {
    fn default() -> Self {
        PresetOptions {
            trials: DEFAULT_TRIALS,
            mc: true,
            seed: 0,
        }
    }
}

struct Plan {
    description: &'static str,
    chosen: &'static [&'static str],
    curves: Vec<(String, SweepSpec)>,
}

fn ints(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(f64::from).collect()
}

fn db_axis() -> Vec<f64> {
    (-10..=10).map(f64::from).collect()
}

fn curve(model: Model, fixed: &[(&str, f64)], swept: &str, values: Vec<f64>, methods: &[SweepMethod]) -> SweepSpec {
    SweepSpec {
        model,
        fixed: fixed
            .iter()
            .map(|&(k, v)| (k.to_string(), v))
            .collect::<BTreeMap<_, _>>(),
        swept: swept.into(),
        values,
        methods: methods.to_vec(),
        trials: DEFAULT_TRIALS,
        seed: 0,
        threshold_unit: ThresholdUnit::Db,
        bound_variant: BoundVariant::AsPrinted,
    }
}

fn plan(preset: Preset, mc: bool) -> Plan {
    use SweepMethod::*;
    let mut simulated = vec![Exact];
    if mc {
        simulated.push(Mc);
    }
    let bounds: &[SweepMethod] = if mc {
        &[Exact, Upper, Lower, Mc]
    } else {
        &[Exact, Upper, Lower]
    };
    match preset {
        Preset::Fig3 => Plan {
            description: "MISO OP vs M, N=2, rho in {0.8, 0.99}",
            chosen: &["gamma_th in {-5, 0, 5} dB", "M from 1 to 100"],
            curves: [0.8, 0.99]
                .iter()
                .flat_map(|&rho| {
                    let simulated = &simulated;
                    [-5.0, 0.0, 5.0].iter().map(move |&g| {
                        (
                            format!("rho={rho} gamma_th={g}dB"),
                            curve(
                                Model::Miso,
                                &[("n", 2.0), ("rho", rho), ("gamma_th", g)],
                                "m",
                                ints(1, 100),
                                simulated,
                            ),
                        )
                    })
                })
                .collect(),
        },
        Preset::Fig4 => Plan {
            description: "MISO OP vs M for N in {1, 2, 3, 4}, rho=0.99",
            chosen: &["gamma_th = 2 dB", "M from 1 to 50"],
            curves: (1..=4)
                .map(|n| {
                    (
                        format!("N={n}"),
                        curve(
                            Model::Miso,
                            &[("n", f64::from(n)), ("rho", 0.99), ("gamma_th", 2.0)],
                            "m",
                            ints(1, 50),
                            &simulated,
                        ),
                    )
                })
                .collect(),
        },
        Preset::Fig5 => Plan {
            description: "MISO OP vs gamma_th, N=2, M in {1, 10, 50}, rho in {0.9, 0.99}",
            chosen: &[
                "gamma_th from -10 to 10 dB in 1 dB steps",
                "the prose threshold 3 is read as 3 dB, which matches the quoted OP values",
            ],
            curves: [0.9, 0.99]
                .iter()
                .flat_map(|&rho| {
                    let simulated = &simulated;
                    [1.0, 10.0, 50.0].iter().map(move |&m| {
                        (
                            format!("M={m} rho={rho}"),
                            curve(
                                Model::Miso,
                                &[("n", 2.0), ("m", m), ("rho", rho)],
                                "gamma_th",
                                db_axis(),
                                simulated,
                            ),
                        )
                    })
                })
                .collect(),
        },
        Preset::Fig6 => Plan {
            description: "MISO exact OP and bounds vs M, gamma_th=0 dB, rho in {0.5, 0.99}",
            chosen: &["N = 2", "M from 1 to 50", "upper bound exponent as printed"],
            curves: [0.5, 0.99]
                .iter()
                .map(|&rho| {
                    (
                        format!("rho={rho}"),
                        curve(
                            Model::Miso,
                            &[("n", 2.0), ("rho", rho), ("gamma_th", 0.0)],
                            "m",
                            ints(1, 50),
                            bounds,
                        ),
                    )
                })
                .collect(),
        },
        Preset::Fig7 => Plan {
            description: "Dual OP vs M_R, rho in {0.9, 0.99}",
            chosen: &[
                "M_T in {1, 5, 10}",
                "gamma_th = 1.5 dB",
                "rho1 = rho2 = rho",
                "M_R from 1 to 10",
            ],
            curves: [0.9, 0.99]
                .iter()
                .flat_map(|&rho| {
                    let simulated = &simulated;
                    [1.0, 5.0, 10.0].iter().map(move |&mt| {
                        (
                            format!("M_T={mt} rho={rho}"),
                            curve(
                                Model::Dual,
                                &[("m_t", mt), ("rho", rho), ("gamma_th", 1.5)],
                                "m_r",
                                ints(1, 10),
                                simulated,
                            ),
                        )
                    })
                })
                .collect(),
        },
        Preset::Fig8 => Plan {
            description: "Dual OP vs gamma_th, rho=0.9",
            chosen: &[
                "(M_T, M_R) in {(1,5), (1,10), (5,5), (5,10)}",
                "gamma_th from -10 to 10 dB",
                "rho1 = rho2",
            ],
            curves: [(1.0, 5.0), (1.0, 10.0), (5.0, 5.0), (5.0, 10.0)]
                .iter()
                .map(|&(mt, mr)| {
                    (
                        format!("M_T={mt} M_R={mr}"),
                        curve(
                            Model::Dual,
                            &[("m_t", mt), ("m_r", mr), ("rho", 0.9)],
                            "gamma_th",
                            db_axis(),
                            &simulated,
                        ),
                    )
                })
                .collect(),
        },
        Preset::Fig9 => Plan {
            description: "Dual exact OP and bounds vs M_R, gamma_th=0 dB, rho=0.99",
            chosen: &["M_T in {1, 5}", "M_R from 1 to 10", "rho1 = rho2"],
            curves: [1.0, 5.0]
                .iter()
                .map(|&mt| {
                    (
                        format!("M_T={mt}"),
                        curve(
                            Model::Dual,
                            &[("m_t", mt), ("rho", 0.99), ("gamma_th", 0.0)],
                            "m_r",
                            ints(1, 10),
                            bounds,
                        ),
                    )
                })
                .collect(),
        },
        Preset::Fig10 => Plan {
            description: "MISO vs Dual OP vs gamma_th, rho=0.9",
            chosen: &[
                "MISO N=2 with M in {5, 10} against Dual M_T=2 with M_R in {5, 10}",
                "gamma_th from -10 to 10 dB",
                "rho1 = rho2",
            ],
            curves: [5.0, 10.0]
                .iter()
                .flat_map(|&m| {
                    [
                        (
                            format!("MISO N=2 M={m}"),
                            curve(
                                Model::Miso,
                                &[("n", 2.0), ("m", m), ("rho", 0.9)],
                                "gamma_th",
                                db_axis(),
                                &simulated,
                            ),
                        ),
                        (
                            format!("Dual M_T=2 M_R={m}"),
                            curve(
                                Model::Dual,
                                &[("m_t", 2.0), ("m_r", m), ("rho", 0.9)],
                                "gamma_th",
                                db_axis(),
                                &simulated,
                            ),
                        ),
                    ]
                })
                .collect(),
        },
    }
}

/// Evaluate every curve of a figure into one table with a leading `curve`
/// column. Monte Carlo seeds are derived per row of the whole table.
pub fn run_figure_preset(preset: Preset, opts: &PresetOptions) -> Result<SweepTable> {
    if opts.mc && opts.trials < crate::spec::MIN_TRIALS {
        return Err(CliError::config(
            "trials",
            format!("must be at least {}", crate::spec::MIN_TRIALS),
        ));
    }
    let plan = plan(preset, opts.mc);
    let mut labels = Vec::new();
    let mut points = Vec::new();
    for (label, spec) in &plan.curves {
        for p in spec.points()? {
            labels.push(label.clone());
            points.push(p);
        }
    }
    let first = &plan.curves[0].1;
    let eval = Evaluation {
        trials: opts.trials,
        seed: opts.seed,
        ..Evaluation::from_spec(first)
    };
    let mut rows = eval.points(&points)?;
    for (row, label) in rows.iter_mut().zip(labels) {
        row.curve = Some(label);
    }
    let mut metadata = vec![
        ("preset".to_string(), preset.name().to_string()),
        ("figure".into(), plan.description.into()),
    ];
    for c in plan.chosen {
        metadata.push(("chosen, not paper-specified".into(), (*c).into()));
    }
    metadata.push(("threshold_unit".into(), first.threshold_unit.name().into()));
    metadata.extend(eval.metadata());
    Ok(SweepTable {
        seed: opts.seed,
        metadata,
        swept: first.swept.clone(),
        methods: eval.methods,
        extra_columns: Vec::new(),
        rows,
    })
}
