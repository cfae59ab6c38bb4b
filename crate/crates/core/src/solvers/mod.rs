//! Exact values of `g(pi, n)` and `P(pi, r)` by exhaustive search, and the
//! evaluable recursive upper bound on `g`.

mod bound;
mod coloring;
mod density;

pub use bound::{
    closed_form_upper_bound, recursive_upper_bound_g, BASE_CASE_G, CRUDE_CONSTANT, MAIN_CONSTANT,
    STRONG_CONSTANT,
};
pub use coloring::{exact_p, exact_p_with, Coloring, ColoringError, ColoringResult};
pub use density::{density_profile, exact_g, exact_g_with, DensityResult};

use thiserror::Error;

/// Default node budget for the exhaustive searches.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub node_budget: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Whether a search ran to completion.
///
/// An incomplete density search reports the best set found (a lower bound on
/// `g`); an incomplete coloring search reports the longest wave-free coloring
/// found (a lower bound on `P`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Exact,
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("universe size must be at least {min}, got {got}")]
    Universe { min: u64, got: u64 },
    #[error("palette size must be at least 1")]
    EmptyPalette,
}

#[derive(Debug)]
pub(crate) struct BudgetExceeded;

pub(crate) struct NodeCounter {
    pub(crate) nodes: u64,
    budget: u64,
}

impl NodeCounter {
    pub(crate) fn new(limits: SearchLimits) -> Self {
        NodeCounter {
            nodes: 0,
            budget: limits.node_budget,
        }
    }

    pub(crate) fn tick(&mut self) -> Result<(), BudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(BudgetExceeded)
        } else {
            Ok(())
        }
    }
}
