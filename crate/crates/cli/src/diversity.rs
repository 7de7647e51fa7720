//! `diversity` subcommand: log-log slope of exact outage at small thresholds.

use std::collections::BTreeMap;

use fas_outage::analytic::{diversity_estimate, dual_exact_op, miso_exact_op, rx_siso_fas_op, DiversityEstimate};
use fas_outage::special::Accuracy;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::spec::{Model, Scenario};

fn default_fit_lo() -> f64 {
    1e-3
}

fn default_fit_hi() -> f64 {
    1e-2
}

fn default_points() -> usize {
    8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiversitySpec {
    pub model: Model,
    pub params: BTreeMap<String, f64>,
    #[serde(default = "default_fit_lo")]
    pub fit_lo: f64,
    #[serde(default = "default_fit_hi")]
    pub fit_hi: f64,
    #[serde(default = "default_points")]
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityReport {
    pub model: Model,
    pub params: BTreeMap<String, f64>,
    #[serde(flatten)]
    pub estimate: DiversityEstimate,
}

impl DiversitySpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config("config", e.to_string()))
    }
}

/// Fit the slope of the exact outage; evaluations use a relative tolerance
/// because outage values at these thresholds sit far below `1e-12`.
pub fn run_diversity(spec: &DiversitySpec) -> Result<DiversityReport> {
    if spec.params.contains_key("gamma_th") {
        return Err(CliError::config(
            "params.gamma_th",
            "the fit chooses its own thresholds",
        ));
    }
    let scenario = Scenario::from_params(spec.model, &spec.params)?;
    let acc = Accuracy::relative(1e-8);
    let estimate = diversity_estimate(
        |th| match &scenario {
            Scenario::Miso(c) => miso_exact_op(c, th, &acc),
            Scenario::Dual(c) => dual_exact_op(c, th, &acc),
            Scenario::RxSiso { m_r, w } => rx_siso_fas_op(*m_r, *w, th, &acc),
        },
        spec.fit_lo,
        spec.fit_hi,
        spec.n_points,
    )
    .map_err(|e| CliError::at(scenario.to_string(), e))?;
    Ok(DiversityReport {
        model: spec.model,
        params: spec.params.clone(),
        estimate,
    })
}
