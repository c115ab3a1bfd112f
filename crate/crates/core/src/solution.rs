use std::time::Duration;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    BudgetExhausted,
}

/// Result of a branch-and-bound run.
///
/// `point`/`value` hold the best incumbent; for `BudgetExhausted` it is the
/// best one found before the budget ran out.
#[derive(Debug, Clone)]
pub struct Solution {
    pub status: Status,
    pub point: Option<Vec<f64>>,
    pub value: Option<f64>,
    /// Upper bound on the optimum for maximization, the final threshold
    /// `f(x) - eta` for the SIT minimizer.
    pub bound: Option<f64>,
    pub nodes: u64,
    pub wall_time: Duration,
}

impl Solution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}
