//! Executable checks of the structural theorems against solver output, and
//! convergence tables for the limit formulas.

mod checks;
mod suites;
mod tables;

pub use checks::{
    check_area_identity, check_curve_equation, check_diagonal, check_equioscillation, check_oracle,
    check_symmetry, CurveOptions,
};
pub use suites::{run_suite, SuiteId, SuiteParams};
pub use tables::{
    app1_convergence_table, convergence_table, strictly_decreasing_tail, ConvergenceRow,
    ConvergenceTable,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asympt::AsymptError;
use crate::kernel::KernelError;
use crate::solver::SolverError;

/// Outcome of one structural check. `passed` holds exactly when every
/// measured discrepancy stays within `tolerance`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub passed: bool,
    pub measured: BTreeMap<String, f64>,
    pub tolerance: f64,
    pub details: String,
}

impl CheckReport {
    fn new(check_id: &str, tolerance: f64) -> Self {
        CheckReport {
            check_id: check_id.to_owned(),
            passed: true,
            measured: BTreeMap::new(),
            tolerance,
            details: String::new(),
        }
    }

    fn measure(&mut self, name: &str, value: f64) {
        self.measured.insert(name.to_owned(), value);
    }

    /// Records a discrepancy that must stay within tolerance.
    fn gate(&mut self, name: &str, discrepancy: f64) {
        self.measure(name, discrepancy);
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail too
        if !(discrepancy.abs() <= self.tolerance) {
            self.passed = false;
            let tol = self.tolerance;
            self.note(&format!("{name} = {discrepancy:e} exceeds {tol:e}"));
        }
    }

    /// Records a boolean condition (reported as 0 = holds / 1 = violated).
    fn gate_flag(&mut self, name: &str, holds: bool, detail: &str) {
        self.measure(name, if holds { 0.0 } else { 1.0 });
        if !holds {
            self.passed = false;
            self.note(detail);
        }
    }

    fn note(&mut self, detail: &str) {
        if !self.details.is_empty() {
            self.details.push_str("; ");
        }
        self.details.push_str(detail);
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Asympt(#[from] AsymptError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("check requires an unweighted p=1 instance")]
    NeedsUnweightedP1,
    #[error("sweep aborted at m={at}: {source}")]
    SweepAborted {
        at: u32,
        #[source]
        source: SolverError,
        /// Rows completed before the failing one, in order.
        partial: ConvergenceTable,
    },
}
