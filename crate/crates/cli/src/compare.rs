//! `compare` subcommand: exact against Monte Carlo, one verdict per row.

use fas_outage::monte_carlo::McEstimate;

use crate::error::{CliError, Result};
use crate::spec::{SweepMethod, SweepSpec};
use crate::sweep::{num, run_sweep, SweepTable};

/// Absolute floor of the agreement tolerance.
pub const ABS_FLOOR: f64 = 2e-3;

/// `max(3 · Wilson half-width, 2e-3)`.
pub fn tolerance(mc: &McEstimate) -> f64 {
    (3.0 * mc.half_width()).max(ABS_FLOOR)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub table: SweepTable,
    pub failures: usize,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// The error to exit with, if any row failed.
    pub fn verdict(&self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(CliError::Tolerance {
                failures: self.failures,
                rows: self.table.rows.len(),
            })
        }
    }
}

/// Run the sweep with exactly `exact` and `mc`, whatever the spec asks for,
/// and append `abs_diff`, `tolerance` and `pass` columns.
pub fn run_compare(spec: &SweepSpec) -> Result<Comparison> {
    let spec = SweepSpec {
        methods: vec![SweepMethod::Exact, SweepMethod::Mc],
        ..spec.clone()
    };
    spec.validate()?;
    let mut table = run_sweep(&spec)?;
    table.extra_columns = vec!["abs_diff".into(), "tolerance".into(), "pass".into()];
    let mut failures = 0;
    for row in &mut table.rows {
        let (exact, mc) = (row.exact.expect("exact requested"), row.mc.expect("mc requested"));
        let diff = (exact.value - mc.p_hat).abs();
        let tol = tolerance(&mc);
        let pass = diff <= tol;
        failures += usize::from(!pass);
        row.extra = vec![num(Some(diff)), num(Some(tol)), pass.to_string()];
    }
    table.metadata.push((
        "compare".into(),
        "pass when |exact - mc| <= max(3 * ci half-width, 2e-3)".into(),
    ));
    Ok(Comparison { table, failures })
}
