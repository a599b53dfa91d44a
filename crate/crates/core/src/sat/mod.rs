//! A complete SAT decision procedure, model counting and enumeration, and a
//! checker for DRUP certificates.

mod cdcl;
mod count;
mod rup;

use thiserror::Error;

use crate::formula::{Assignment, CnfFormula};

pub use count::{count_models, enumerate_models, ModelCount, ModelList};
pub use rup::{verify_rup, ProofParseError, ProofStep, RupCheck, RupFailure, RupProof};

pub(crate) use cdcl::{Outcome, Solver};

/// Conflicts allowed per `solve` call unless configured otherwise.
pub const DEFAULT_CONFLICT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    /// A total model satisfying every clause.
    Sat(Assignment),
    /// Unsatisfiable, with a DRUP trace when tracing was requested.
    Unsat(Option<RupProof>),
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }

    pub fn model(&self) -> Option<&Assignment> {
        match self {
            SolveResult::Sat(m) => Some(m),
            SolveResult::Unsat(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("conflict budget of {budget} exhausted")]
    Budget { budget: u64 },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub conflict_budget: u64,
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            conflict_budget: DEFAULT_CONFLICT_BUDGET,
            trace: false,
        }
    }
}

/// Decides `formula` with the default conflict budget.
pub fn solve(formula: &CnfFormula, trace: bool) -> Result<SolveResult, SolveError> {
    solve_with(
        formula,
        SolverConfig {
            trace,
            ..SolverConfig::default()
        },
    )
}

pub fn solve_with(formula: &CnfFormula, config: SolverConfig) -> Result<SolveResult, SolveError> {
    let mut solver = Solver::from_formula(formula, config.trace);
    match solver.solve(config.conflict_budget) {
        Outcome::Sat => {
            let model = solver.model();
            assert!(
                formula.is_satisfied_by(&model),
                "solver returned a model that falsifies a clause"
            );
            Ok(SolveResult::Sat(model))
        }
        Outcome::Unsat => Ok(SolveResult::Unsat(solver.take_proof())),
        Outcome::Budget => Err(SolveError::Budget {
            budget: config.conflict_budget,
        }),
    }
}

/// Convenience: `Some(true)` for SAT, `Some(false)` for UNSAT, `None` when
/// the budget ran out.
pub fn is_satisfiable(formula: &CnfFormula) -> Option<bool> {
    solve(formula, false).ok().map(|r| r.is_sat())
}
