//! Grid evaluation and the CSV table it produces.

use std::fmt::Write as _;

use fas_outage::analytic::{
    dual_exact_op, dual_op_lower, dual_op_upper, miso_exact_op, miso_op_lower, miso_op_upper, rx_siso_fas_op,
    BoundVariant, OpResult,
};
use fas_outage::monte_carlo::{estimate_op_dual, estimate_op_miso, estimate_op_rx_siso, McEstimate, RNG_DESCRIPTION};
use fas_outage::special::Accuracy;
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::spec::{Point, Scenario, SweepMethod, SweepSpec};

pub const TOOL_NAME: &str = "fas-outage-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Per-row Monte Carlo seed: a splitmix64 finalizer over the master seed and
/// the row index, so rows draw from unrelated streams.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    /// Curve label, set only in multi-curve tables such as figure presets.
    pub curve: Option<String>,
    pub x: f64,
    pub exact: Option<OpResult>,
    pub upper: Option<OpResult>,
    pub lower: Option<OpResult>,
    pub mc: Option<McEstimate>,
    /// Values for [`SweepTable::extra_columns`], already formatted.
    pub extra: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub seed: u64,
    /// `key: value` pairs written as comment lines after the version line.
    pub metadata: Vec<(String, String)>,
    pub swept: String,
    pub methods: Vec<SweepMethod>,
    pub extra_columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl SweepTable {
    pub fn has_curves(&self) -> bool {
        self.rows.iter().any(|r| r.curve.is_some())
    }

    /// Rows belonging to one curve, in sweep order.
    pub fn curve<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.curve.as_deref() == Some(label))
    }

    pub fn header(&self) -> Vec<String> {
        let mut cols = Vec::new();
        if self.has_curves() {
            cols.push("curve".to_string());
        }
        cols.push(self.swept.clone());
        for m in &self.methods {
            match m {
                SweepMethod::Exact => cols.push("op_exact".into()),
                SweepMethod::Upper => cols.push("op_upper".into()),
                SweepMethod::Lower => cols.push("op_lower".into()),
                SweepMethod::Mc => cols.extend(["op_mc".into(), "mc_ci_low".into(), "mc_ci_high".into()]),
            }
        }
        cols.extend(self.extra_columns.iter().cloned());
        cols
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# {TOOL_NAME} v{VERSION} seed={}\n", self.seed);
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        out.push_str(&self.header().join(","));
        out.push('\n');
        let curves = self.has_curves();
        for row in &self.rows {
            let mut cells = Vec::new();
            if curves {
                cells.push(row.curve.clone().unwrap_or_default());
            }
            cells.push(format!("{}", row.x));
            for m in &self.methods {
                match m {
                    SweepMethod::Exact => cells.push(num(row.exact.map(|r| r.value))),
                    SweepMethod::Upper => cells.push(num(row.upper.map(|r| r.value))),
                    SweepMethod::Lower => cells.push(num(row.lower.map(|r| r.value))),
                    SweepMethod::Mc => {
                        cells.push(num(row.mc.map(|e| e.p_hat)));
                        cells.push(num(row.mc.map(|e| e.ci95_low)));
                        cells.push(num(row.mc.map(|e| e.ci95_high)));
                    }
                }
            }
            cells.extend(row.extra.iter().cloned());
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn num(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

/// What to compute at each point.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub methods: Vec<SweepMethod>,
    pub trials: u64,
    pub seed: u64,
    pub variant: BoundVariant,
    pub accuracy: Accuracy,
}

impl Evaluation {
    pub fn from_spec(spec: &SweepSpec) -> Self {
        Evaluation {
            methods: spec.sorted_methods(),
            trials: spec.trials,
            seed: spec.seed,
            variant: spec.bound_variant,
            accuracy: Accuracy::default(),
        }
    }

    pub fn point(&self, index: usize, p: &Point) -> Result<Row> {
        let label = format!("{} gamma_th={}", p.scenario, p.threshold.value());
        let at = |e| CliError::at(label.clone(), e);
        let mut row = Row {
            curve: None,
            x: p.x,
            exact: None,
            upper: None,
            lower: None,
            mc: None,
            extra: Vec::new(),
        };
        let th = p.threshold;
        let acc = &self.accuracy;
        for m in &self.methods {
            match (m, &p.scenario) {
                (SweepMethod::Exact, Scenario::Miso(c)) => row.exact = Some(miso_exact_op(c, th, acc).map_err(at)?),
                (SweepMethod::Exact, Scenario::Dual(c)) => row.exact = Some(dual_exact_op(c, th, acc).map_err(at)?),
                (SweepMethod::Exact, Scenario::RxSiso { m_r, w }) => {
                    row.exact = Some(rx_siso_fas_op(*m_r, *w, th, acc).map_err(at)?)
                }
                (SweepMethod::Upper, Scenario::Miso(c)) => {
                    row.upper = Some(miso_op_upper(c, th, self.variant).map_err(at)?)
                }
                (SweepMethod::Upper, Scenario::Dual(c)) => row.upper = Some(dual_op_upper(c, th).map_err(at)?),
                (SweepMethod::Lower, Scenario::Miso(c)) => row.lower = Some(miso_op_lower(c, th).map_err(at)?),
                (SweepMethod::Lower, Scenario::Dual(c)) => row.lower = Some(dual_op_lower(c, th).map_err(at)?),
                (SweepMethod::Upper | SweepMethod::Lower, Scenario::RxSiso { .. }) => {
                    return Err(CliError::config("methods", "rx_siso has no closed-form bounds"))
                }
                (SweepMethod::Mc, s) => {
                    let seed = derive_seed(self.seed, index as u64);
                    let e = match s {
                        Scenario::Miso(c) => estimate_op_miso(c, th, self.trials, seed),
                        Scenario::Dual(c) => estimate_op_dual(c, th, self.trials, seed),
                        Scenario::RxSiso { m_r, w } => estimate_op_rx_siso(*m_r, *w, th, self.trials, seed),
                    };
                    row.mc = Some(e.map_err(at)?);
                }
            }
        }
        Ok(row)
    }

    /// Evaluate all points concurrently; rows come back in input order.
    pub fn points(&self, points: &[Point]) -> Result<Vec<Row>> {
        points.par_iter().enumerate().map(|(i, p)| self.point(i, p)).collect()
    }

    pub fn metadata(&self) -> Vec<(String, String)> {
        let mut md = vec![(
            "methods".to_string(),
            self.methods
                .iter()
                .map(|m| serde_json::to_value(m).unwrap().as_str().unwrap().to_string())
                .collect::<Vec<_>>()
                .join(","),
        )];
        if self.methods.iter().any(|m| matches!(m, SweepMethod::Exact)) {
            md.push((
                "accuracy".into(),
                format!(
                    "abs_tol={:e} rel_tol={:e}",
                    self.accuracy.abs_tol, self.accuracy.rel_tol
                ),
            ));
        }
        if self.methods.contains(&SweepMethod::Upper) {
            md.push((
                "bound_variant".into(),
                serde_json::to_value(self.variant).unwrap().as_str().unwrap().into(),
            ));
        }
        if self.methods.contains(&SweepMethod::Mc) {
            md.push(("trials".into(), self.trials.to_string()));
            md.push(("rng".into(), RNG_DESCRIPTION.into()));
            md.push(("mc_seed".into(), "splitmix64(seed, row index) per row".into()));
        }
        md
    }
}

fn fixed_summary(spec: &SweepSpec) -> String {
    spec.fixed
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Evaluate every requested method at every swept value.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    let points = spec.points()?;
    let eval = Evaluation::from_spec(spec);
    let rows = eval.points(&points)?;
    let mut metadata = vec![
        ("model".to_string(), spec.model.name().to_string()),
        ("fixed".into(), fixed_summary(spec)),
        ("swept".into(), spec.swept.clone()),
        ("threshold_unit".into(), spec.threshold_unit.name().into()),
    ];
    metadata.extend(eval.metadata());
    Ok(SweepTable {
        seed: spec.seed,
        metadata,
        swept: spec.swept.clone(),
        methods: eval.methods,
        extra_columns: Vec::new(),
        rows,
    })
}
