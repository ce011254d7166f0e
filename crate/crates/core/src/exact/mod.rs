//! Exactness checks, the two solvers, verification, and operation counts.
//!
//! [`solve_basic`] integrates each coefficient in its own variable and keeps
//! one copy of every distinct term; [`solve_standard`] is the textbook
//! integrate-then-correct recursion and serves as its oracle. Both verify
//! their potential before returning it.

mod check;
mod form;
mod solve;
mod verify;

use thiserror::Error;

pub use check::{check_exact, CheckMethod, ExactnessReport, PairFailure};
pub use form::{DifferentialForm, FormError};
pub use solve::{
    solve_basic, solve_basic_with, solve_standard, solve_standard_with, term_multiplicity_diagnostic,
    Method, Multiplicity, OperationTally, Solution, SolveError, SolveOptions,
};
pub use verify::{verification_sampling, verify_solution, VarVerdict, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostModelError {
    #[error("the cost model needs at least two variables, got {0}")]
    TooFewVariables(u32),
    #[error("cost for {0} variables overflows")]
    Overflow(u32),
}

/// Integrations plus differentiations the standard method needs for `n`
/// variables: `(n - 1) * 2^n + 1`.
pub fn cost_model_standard(n: u32) -> Result<u64, CostModelError> {
    if n < 2 {
        return Err(CostModelError::TooFewVariables(n));
    }
    1u64.checked_shl(n)
        .filter(|_| n < 64)
        .and_then(|p| p.checked_mul(u64::from(n - 1)))
        .and_then(|v| v.checked_add(1))
        .ok_or(CostModelError::Overflow(n))
}
