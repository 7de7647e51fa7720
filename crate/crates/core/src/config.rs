//! Scenario parameters shared by the analytic and Monte Carlo evaluators.
//!
//! Gains are normalized by `sigma2`, so thresholds live on the axis
//! `γ_FAS / γ̄`: an outage is `max gain / σ² < γ_th`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_rho(field: &'static str, rho: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::invalid(field, format!("must lie in [0, 1), got {rho}")));
    }
    Ok(())
}

fn check_sigma2(sigma2: f64) -> Result<()> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::invalid(
            "sigma2",
            format!("must be positive and finite, got {sigma2}"),
        ));
    }
    Ok(())
}

fn default_sigma2() -> f64 {
    1.0
}

/// `N` transmit antennas with MRT serving a receiver with `M` equally
/// correlated ports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MisoConfig {
    pub n_antennas: u32,
    pub m_ports: u32,
    /// Amplitude correlation; port gains have power correlation `rho²`.
    pub rho: f64,
    #[serde(default = "default_sigma2")]
    pub sigma2: f64,
}

impl MisoConfig {
    pub fn new(n_antennas: u32, m_ports: u32, rho: f64) -> Result<Self> {
        let cfg = MisoConfig {
            n_antennas,
            m_ports,
            rho,
            sigma2: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_sigma2(mut self, sigma2: f64) -> Result<Self> {
        self.sigma2 = sigma2;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_antennas < 1 {
            return Err(Error::invalid("n_antennas", "must be at least 1"));
        }
        if self.m_ports < 1 {
            return Err(Error::invalid("m_ports", "must be at least 1"));
        }
        check_rho("rho", self.rho)?;
        check_sigma2(self.sigma2)
    }
}

/// Single-element FAS at both ends: `M_T` transmit and `M_R` receive ports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualConfig {
    pub m_t: u32,
    pub m_r: u32,
    /// Amplitude correlation between receive ports.
    pub rho1: f64,
    /// Amplitude correlation between transmit ports.
    pub rho2: f64,
    #[serde(default = "default_sigma2")]
    pub sigma2: f64,
}

impl DualConfig {
    pub fn new(m_t: u32, m_r: u32, rho1: f64, rho2: f64) -> Result<Self> {
        let cfg = DualConfig {
            m_t,
            m_r,
            rho1,
            rho2,
            sigma2: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_sigma2(mut self, sigma2: f64) -> Result<Self> {
        self.sigma2 = sigma2;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_t < 1 {
            return Err(Error::invalid("m_t", "must be at least 1"));
        }
        if self.m_r < 1 {
            return Err(Error::invalid("m_r", "must be at least 1"));
        }
        check_rho("rho1", self.rho1)?;
        check_rho("rho2", self.rho2)?;
        check_sigma2(self.sigma2)
    }

    /// Number of transmit/receive port pairs.
    pub fn pairs(&self) -> usize {
        self.m_t as usize * self.m_r as usize
    }
}

/// Outage threshold on the normalized SNR axis.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Threshold(f64);

impl Threshold {
    pub fn linear(value: f64) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::invalid(
                "gamma_th",
                format!("must be positive and finite, got {value}"),
            ));
        }
        Ok(Threshold(value))
    }

    /// `10^(dB/10)`.
    pub fn from_db(db: f64) -> Result<Self> {
        Self::linear(10f64.powf(db / 10.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn db(self) -> f64 {
        10.0 * self.0.log10()
    }
}

impl TryFrom<f64> for Threshold {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Threshold::linear(value)
    }
}

impl From<Threshold> for f64 {
    fn from(th: Threshold) -> f64 {
        th.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_table() {
        for &(db, lin) in &[(0.0, 1.0), (3.0, 1.9953), (10.0, 10.0)] {
            let th = Threshold::from_db(db).unwrap();
            assert!((th.value() - lin).abs() < 1e-4, "{db} dB -> {}", th.value());
            assert!((th.db() - db).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_values_name_their_field() {
        let err = MisoConfig::new(2, 3, 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { field: "rho", .. }));
        let err = DualConfig::new(1, 0, 0.5, 0.5).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { field: "m_r", .. }));
        let err = MisoConfig::new(1, 1, 0.0).unwrap().with_sigma2(0.0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { field: "sigma2", .. }));
        assert!(Threshold::linear(0.0).is_err());
        assert!(Threshold::linear(f64::NAN).is_err());
    }

    #[test]
    fn threshold_rejects_bad_json() {
        assert!(serde_json::from_str::<Threshold>("-1.0").is_err());
        let th: Threshold = serde_json::from_str("2.5").unwrap();
        assert_eq!(th.value(), 2.5);
    }
}
