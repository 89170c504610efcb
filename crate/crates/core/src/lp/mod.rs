//! The communication lower bound, the S-CDC plan optimiser, and the pieces
//! they share: split-size costs, an exact small-LP solver, and floor rounding.

mod programs;
mod solver;
mod split;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::json;
use thiserror::Error;

use crate::rational::{exact, Rational};

pub use programs::{lower_bound, round_plan, scdc_optimize, scdc_predicted, RoundedPlan};
pub use solver::{solve_small_lp, Constraint, Sense, SmallLp, MAX_CONSTRAINTS};
pub use split::{split_costs, SplitCosts, SplitPlan};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("at most {MAX_CONSTRAINTS} constraints supported, got {given}")]
    TooManyConstraints { given: usize },
    #[error("constraint has {found} coefficients, objective has {expected}")]
    Shape { expected: usize, found: usize },
    #[error("split size {split} is outside [1:{r}]")]
    SplitOutOfRange { split: usize, r: usize },
    #[error("budget {} is infeasible: at least {minimum} computations are needed", exact(.budget))]
    BudgetInfeasible { budget: Rational, minimum: u64 },
    #[error("rounding expects at most two nonzero weights, found {count}")]
    UnexpectedSupport { count: usize },
    #[error("split plan covers {found} rounds per subset, expected eta1*eta2 = {expected}")]
    PlanSize { expected: u64, found: u64 },
}

/// Optimal vertex of a small LP. `weights[l - 1]` is `z_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub weights: Vec<Rational>,
    pub objective: Rational,
    pub feasible: bool,
    /// Computation budget the program was solved for, if any.
    pub budget: Option<Rational>,
}

impl LpSolution {
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.weights.iter().enumerate().filter(|(_, z)| **z != Rational::from_integer(0)).map(|(i, z)| (i + 1, z))
    }
}

/// `{"budget", "feasible", "weights": [{"ell", "z_num", "z_den"}], "objective": "p/q"}`
impl Serialize for LpSolution {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let weights: Vec<_> = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, z)| json!({"ell": i + 1, "z_num": *z.numer(), "z_den": *z.denom()}))
            .collect();
        let mut s = serializer.serialize_struct("LpSolution", 4)?;
        s.serialize_field("budget", &self.budget.as_ref().map(exact))?;
        s.serialize_field("feasible", &self.feasible)?;
        s.serialize_field("weights", &weights)?;
        s.serialize_field("objective", &exact(&self.objective))?;
        s.end()
    }
}
