//! Algorithm selection shared by the command line and the C interface.

use thiserror::Error;

use crate::instance::{validate_instance, Instance, InstanceKind, Solution, Violation};
use crate::oracle::{brute_force_solve, BudgetExceeded};
use crate::sat::{eligibility, solve_via_2sat, Eligibility, SatError};
use crate::tree_solver::{solve, SolveError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Algo {
    /// Tree solver for tree instances, else 2-SAT when it applies, else
    /// brute force.
    Auto,
    Tree,
    Sat2,
    Brute,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DispatchError {
    #[error("invalid instance: {0:?}")]
    Invalid(Vec<Violation>),
    #[error("instance is not of tree kind")]
    NotATree,
    #[error("cell {0} has more than two admissible sites; 2-SAT does not apply")]
    NotEligible(usize),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("internal failure: {0}")]
    Internal(String),
}

/// Decides `inst` with `algo`, returning the answer and the algorithm that
/// produced it. `Ok(None)` is a NO answer; returned sites pass the checker.
pub fn solve_with(inst: &Instance, algo: Algo, budget: u128) -> Result<(Option<Solution>, Algo), DispatchError> {
    let violations = validate_instance(inst);
    if !violations.is_empty() {
        return Err(DispatchError::Invalid(violations));
    }
    let algo = match algo {
        Algo::Auto if inst.kind == InstanceKind::Tree => Algo::Tree,
        Algo::Auto if !matches!(eligibility(inst), Eligibility::TooLarge(_)) => Algo::Sat2,
        Algo::Auto => Algo::Brute,
        a => a,
    };
    let answer = match algo {
        Algo::Tree => solve(inst).map_err(|e| match e {
            SolveError::NotATree => DispatchError::NotATree,
            e => DispatchError::Internal(e.to_string()),
        })?,
        Algo::Sat2 => solve_via_2sat(inst).map_err(|e| match e {
            SatError::NotEligible(i) => DispatchError::NotEligible(i),
            e => DispatchError::Internal(e.to_string()),
        })?,
        Algo::Brute | Algo::Auto => brute_force_solve(inst, budget)?,
    };
    Ok((answer, algo))
}
