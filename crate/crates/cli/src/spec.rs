//! Sweep configuration: the JSON document accepted by `sweep` and `compare`.

use std::collections::BTreeMap;
use std::fmt;

use fas_outage::analytic::BoundVariant;
use fas_outage::{DualConfig, MisoConfig, Threshold};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const MIN_TRIALS: u64 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Miso,
    Dual,
    RxSiso,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Miso => "miso",
            Model::Dual => "dual",
            Model::RxSiso => "rx_siso",
        }
    }

    /// Parameter names the model accepts, `gamma_th` included.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Model::Miso => &["n", "m", "rho", "sigma2", "gamma_th"],
            Model::Dual => &["m_t", "m_r", "rho", "rho1", "rho2", "sigma2", "gamma_th"],
            Model::RxSiso => &["m_r", "w", "gamma_th"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMethod {
    Exact,
    Upper,
    Lower,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdUnit {
    Linear,
    Db,
}

impl ThresholdUnit {
    pub fn name(self) -> &'static str {
        match self {
            ThresholdUnit::Linear => "linear",
            ThresholdUnit::Db => "db",
        }
    }

    pub fn threshold(self, value: f64) -> fas_outage::Result<Threshold> {
        match self {
            ThresholdUnit::Linear => Threshold::linear(value),
            ThresholdUnit::Db => Threshold::from_db(value),
        }
    }
}

fn default_trials() -> u64 {
    DEFAULT_TRIALS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub model: Model,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    pub swept: String,
    pub values: Vec<f64>,
    pub methods: Vec<SweepMethod>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    pub threshold_unit: ThresholdUnit,
    #[serde(default)]
    pub bound_variant: BoundVariant,
}

/// A fully resolved channel model.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Miso(MisoConfig),
    Dual(DualConfig),
    RxSiso { m_r: usize, w: f64 },
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub x: f64,
    pub scenario: Scenario,
    pub threshold: Threshold,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SweepSpec = serde_json::from_str(text).map_err(|e| CliError::config("config", e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Methods in column order, without duplicates.
    pub fn sorted_methods(&self) -> Vec<SweepMethod> {
        let mut m = self.methods.clone();
        m.sort();
        m.dedup();
        m
    }

    pub fn validate(&self) -> Result<()> {
        self.points().map(|_| ())
    }

    /// Resolve every swept value into a grid point, checking the whole spec.
    pub fn points(&self) -> Result<Vec<Point>> {
        let known = self.model.parameters();
        for key in self.fixed.keys() {
            if !known.contains(&key.as_str()) {
                return Err(CliError::config(
                    format!("fixed.{key}"),
                    format!(
                        "not a {} parameter (expected one of {})",
                        self.model.name(),
                        known.join(", ")
                    ),
                ));
            }
        }
        if !known.contains(&self.swept.as_str()) {
            return Err(CliError::config(
                "swept",
                format!("`{}` is not a {} parameter", self.swept, self.model.name()),
            ));
        }
        if self.fixed.contains_key(&self.swept) {
            return Err(CliError::config(
                "swept",
                format!("`{}` also appears in fixed", self.swept),
            ));
        }
        if self.values.is_empty() {
            return Err(CliError::config("values", "must not be empty"));
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(CliError::config("values", format!("{v} is not finite")));
        }
        let increasing = self.values.windows(2).all(|w| w[0] < w[1]);
        let decreasing = self.values.windows(2).all(|w| w[0] > w[1]);
        if !(increasing || decreasing) {
            return Err(CliError::config(
                "values",
                "must be strictly increasing or strictly decreasing",
            ));
        }
        if self.methods.is_empty() {
            return Err(CliError::config(
                "methods",
                "must name at least one of exact, upper, lower, mc",
            ));
        }
        if self.model == Model::RxSiso
            && self
                .methods
                .iter()
                .any(|m| matches!(m, SweepMethod::Upper | SweepMethod::Lower))
        {
            return Err(CliError::config("methods", "rx_siso has no closed-form bounds"));
        }
        if self.methods.contains(&SweepMethod::Mc) && self.trials < MIN_TRIALS {
            return Err(CliError::config(
                "trials",
                format!(
                    "must be at least {MIN_TRIALS} when mc is requested, got {}",
                    self.trials
                ),
            ));
        }
        self.values
            .iter()
            .map(|&x| {
                let mut params = self.fixed.clone();
                params.insert(self.swept.clone(), x);
                let point = format!("{}={x}", self.swept);
                let scenario = Scenario::from_params(self.model, &params).map_err(|e| annotate(e, &point))?;
                let threshold = threshold_from(&params, self.threshold_unit).map_err(|e| annotate(e, &point))?;
                Ok(Point { x, scenario, threshold })
            })
            .collect()
    }
}

fn annotate(err: CliError, point: &str) -> CliError {
    match err {
        CliError::Config { field, message } => CliError::Config {
            field,
            message: format!("{message} (at {point})"),
        },
        other => other,
    }
}

fn required(params: &BTreeMap<String, f64>, name: &str) -> Result<f64> {
    params
        .get(name)
        .copied()
        .ok_or_else(|| CliError::config(name, "missing"))
}

fn count(params: &BTreeMap<String, f64>, name: &str) -> Result<u32> {
    let v = required(params, name)?;
    if v.fract() != 0.0 || !(1.0..=f64::from(u32::MAX)).contains(&v) {
        return Err(CliError::config(name, format!("must be a positive integer, got {v}")));
    }
    Ok(v as u32)
}

fn lib_err(e: fas_outage::Error) -> CliError {
    match e {
        fas_outage::Error::InvalidParameter { field, message } => CliError::config(field, message),
        other => CliError::config("params", other.to_string()),
    }
}

/// The threshold stored under `gamma_th`, read in `unit`.
pub fn threshold_from(params: &BTreeMap<String, f64>, unit: ThresholdUnit) -> Result<Threshold> {
    let v = required(params, "gamma_th")?;
    unit.threshold(v).map_err(lib_err)
}

impl Scenario {
    /// Build a scenario from named parameters; `gamma_th` is ignored here.
    pub fn from_params(model: Model, params: &BTreeMap<String, f64>) -> Result<Self> {
        let known = model.parameters();
        if let Some(key) = params.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(CliError::config(
                key.as_str(),
                format!(
                    "not a {} parameter (expected one of {})",
                    model.name(),
                    known.join(", ")
                ),
            ));
        }
        let sigma2 = params.get("sigma2").copied().unwrap_or(1.0);
        match model {
            Model::Miso => {
                let m = count(params, "m")?;
                // with one port the correlation never enters
                let rho = match params.get("rho") {
                    Some(&r) => r,
                    None if m == 1 => 0.0,
                    None => return Err(CliError::config("rho", "missing")),
                };
                let cfg = MisoConfig::new(count(params, "n")?, m, rho)
                    .and_then(|c| c.with_sigma2(sigma2))
                    .map_err(lib_err)?;
                Ok(Scenario::Miso(cfg))
            }
            Model::Dual => {
                let shared = params.get("rho").copied();
                let (m_t, m_r) = (count(params, "m_t")?, count(params, "m_r")?);
                let pick = |name: &str, unused: bool| -> Result<f64> {
                    match (params.get(name), shared) {
                        (Some(_), Some(_)) => Err(CliError::config(name, "give either rho or rho1/rho2, not both")),
                        (Some(&v), None) | (None, Some(v)) => Ok(v),
                        (None, None) if unused => Ok(0.0),
                        (None, None) => Err(CliError::config(name, "missing (or give rho for both)")),
                    }
                };
                let cfg = DualConfig::new(m_t, m_r, pick("rho1", m_r == 1)?, pick("rho2", m_t == 1)?)
                    .and_then(|c| c.with_sigma2(sigma2))
                    .map_err(lib_err)?;
                Ok(Scenario::Dual(cfg))
            }
            Model::RxSiso => {
                let m_r = count(params, "m_r")? as usize;
                let w = required(params, "w")?;
                if !(w > 0.0 && w.is_finite()) {
                    return Err(CliError::config("w", format!("must be positive and finite, got {w}")));
                }
                if m_r < 2 {
                    return Err(CliError::config("m_r", "needs at least two ports to span an aperture"));
                }
                Ok(Scenario::RxSiso { m_r, w })
            }
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::Miso(c) => write!(f, "miso n={} m={} rho={}", c.n_antennas, c.m_ports, c.rho),
            Scenario::Dual(c) => write!(f, "dual m_t={} m_r={} rho1={} rho2={}", c.m_t, c.m_r, c.rho1, c.rho2),
            Scenario::RxSiso { m_r, w } => write!(f, "rx_siso m_r={m_r} w={w}"),
        }
    }
}
