//! Port correlation structures: the equally correlated receive model, the
//! Kronecker transmit/receive model, and the Jakes profile.
//!
//! Two conventions coexist and are kept apart by name. Amplitude
//! correlation (`rho`) is the coefficient between complex channel
//! coefficients; power correlation (`rho²`) is the coefficient between
//! their squared magnitudes.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::bessel_j0;

const MAX_ENTRIES: usize = 1_000_000;
const PSD_TOLERANCE: f64 = -1e-10;

fn check_rho(field: &'static str, rho: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::invalid(field, format!("must lie in [0, 1), got {rho}")));
    }
    Ok(())
}

fn check_dim(dim: usize) -> Result<()> {
    if dim.checked_mul(dim).map_or(true, |n| n > MAX_ENTRIES) {
        return Err(Error::invalid(
            "dim",
            format!("{dim}x{dim} exceeds {MAX_ENTRIES} entries"),
        ));
    }
    Ok(())
}

/// `size` ports sharing one amplitude correlation `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquiCorrelation {
    pub size: usize,
    pub rho: f64,
}

impl EquiCorrelation {
    pub fn new(size: usize, rho: f64) -> Result<Self> {
        if size < 1 {
            return Err(Error::invalid("size", "must be at least 1"));
        }
        check_rho("rho", rho)?;
        check_dim(size)?;
        Ok(EquiCorrelation { size, rho })
    }

    pub fn amplitude_rho(&self) -> f64 {
        self.rho
    }

    pub fn power_rho_sq(&self) -> f64 {
        self.rho * self.rho
    }
}

/// Receive ports correlated by `rho1`, transmit ports by `rho2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KroneckerCorrelation {
    pub m_r: usize,
    pub m_t: usize,
    pub rho1: f64,
    pub rho2: f64,
}

impl KroneckerCorrelation {
    pub fn new(m_r: usize, m_t: usize, rho1: f64, rho2: f64) -> Result<Self> {
        if m_r < 1 {
            return Err(Error::invalid("m_r", "must be at least 1"));
        }
        if m_t < 1 {
            return Err(Error::invalid("m_t", "must be at least 1"));
        }
        check_rho("rho1", rho1)?;
        check_rho("rho2", rho2)?;
        check_dim(m_r.saturating_mul(m_t))?;
        Ok(KroneckerCorrelation { m_r, m_t, rho1, rho2 })
    }

    /// Amplitude correlation between pair `(i, j)` and pair `(k, l)`, where
    /// `i, k` index receive ports and `j, l` transmit ports.
    pub fn amplitude_rho(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> f64 {
        match (i == k, j == l) {
            (true, true) => 1.0,
            (false, true) => self.rho1,
            (true, false) => self.rho2,
            (false, false) => self.rho1 * self.rho2,
        }
    }
}

/// Dense symmetric correlation matrix with unit diagonal, verified positive
/// semidefinite at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    entries: DMatrix<f64>,
}

impl CorrelationMatrix {
    /// Checks symmetry, unit diagonal, entries in `[0, 1]` and PSD.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::invalid("entries", "must be a non-empty square matrix"));
        }
        check_dim(n)?;
        for i in 0..n {
            if entries[(i, i)] != 1.0 {
                return Err(Error::invalid("entries", format!("diagonal entry {i} is not 1")));
            }
            for j in 0..i {
                let v = entries[(i, j)];
                if v != entries[(j, i)] {
                    return Err(Error::invalid("entries", format!("not symmetric at ({i}, {j})")));
                }
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::invalid(
                        "entries",
                        format!("entry ({i}, {j}) = {v} outside [0, 1]"),
                    ));
                }
            }
        }
        let m = CorrelationMatrix { entries };
        let min = m.min_eigenvalue();
        if min < PSD_TOLERANCE {
            return Err(Error::invalid(
                "entries",
                format!("not positive semidefinite (eigenvalue {min:e})"),
            ));
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.entries.clone()).eigenvalues.min()
    }

    /// Entry-wise square: the correlation of squared magnitudes for jointly
    /// Gaussian channels whose amplitude correlations are stored here.
    pub fn power_matrix(&self) -> Result<CorrelationMatrix> {
        CorrelationMatrix::new(self.entries.map(|v| v * v))
    }
}

/// Receive-side matrix of the equally correlated model: off-diagonals are
/// the power correlation `rho²`.
pub fn build_equicorrelated(size: usize, rho: f64) -> Result<CorrelationMatrix> {
    let eq = EquiCorrelation::new(size, rho)?;
    let off = eq.power_rho_sq();
    CorrelationMatrix::new(DMatrix::from_fn(size, size, |i, j| if i == j { 1.0 } else { off }))
}

/// Amplitude correlation matrix of the Kronecker model.
///
/// Pair `(i, j)` (receive port `i`, transmit port `j`) sits at index
/// `j * m_r + i`, which makes the result `R_Tᵀ ⊗ R_R` with amplitude
/// factors `R_R` (off-diagonal `rho1`) and `R_T` (off-diagonal `rho2`).
pub fn build_kronecker(cfg: &KroneckerCorrelation) -> Result<CorrelationMatrix> {
    let cfg = KroneckerCorrelation::new(cfg.m_r, cfg.m_t, cfg.rho1, cfg.rho2)?;
    let dim = cfg.m_r * cfg.m_t;
    let pair = |idx: usize| (idx % cfg.m_r, idx / cfg.m_r);
    CorrelationMatrix::new(DMatrix::from_fn(dim, dim, |a, b| cfg.amplitude_rho(pair(a), pair(b))))
}

/// `ρ_i = J_0(2π (i-1) W / (M_R - 1))` for `i = 1..=m_r`.
pub fn jakes_coefficients(m_r: usize, w: f64) -> Result<Vec<f64>> {
    if m_r < 2 {
        return Err(Error::Domain(format!("Jakes profile needs m_r >= 2, got {m_r}")));
    }
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::invalid("w", format!("must be positive and finite, got {w}")));
    }
    let spacing = 2.0 * std::f64::consts::PI * w / (m_r - 1) as f64;
    (0..m_r).map(|i| bessel_j0(spacing * i as f64)).collect()
}
