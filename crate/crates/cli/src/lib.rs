//! Sweeps, figure presets and exact-versus-simulation comparisons over the
//! `fas-outage` library, emitted as CSV or JSON.
//!
//! ```
//! use fas_outage_lab::{run_sweep, SweepSpec};
//!
//! let spec = SweepSpec::from_json(r#"{
//!     "model": "dual",
//!     "fixed": {"m_t": 1, "m_r": 1, "rho": 0.5},
//!     "swept": "gamma_th",
//!     "values": [0.5, 1, 2],
//!     "methods": ["exact"],
//!     "threshold_unit": "linear"
//! }"#).unwrap();
//! let table = run_sweep(&spec).unwrap();
//! for row in &table.rows {
//!     let want = 1.0 - (-row.x).exp();
//!     assert!((row.exact.unwrap().value - want).abs() < 1e-12);
//! }
//! ```

pub mod compare;
pub mod diversity;
pub mod error;
pub mod preset;
pub mod selftest;
pub mod spec;
pub mod sweep;

pub use compare::{run_compare, Comparison};
pub use diversity::{run_diversity, DiversityReport, DiversitySpec};
pub use error::{CliError, Result};
pub use preset::{run_figure_preset, Preset, PresetOptions};
pub use selftest::{run_selftest, Check};
pub use spec::{Model, Scenario, SweepMethod, SweepSpec, ThresholdUnit};
pub use sweep::{derive_seed, run_sweep, Row, SweepTable};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
