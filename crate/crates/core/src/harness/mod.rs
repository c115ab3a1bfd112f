//! Resource allocation strategies and the experiment pipeline.
//!
//! Solver tolerances are given in normalized units and scaled per instance:
//! rate and GEE tolerances are per Hz of bandwidth, the power tolerance of the
//! minimizer is relative to the per-user budget.

mod config;
mod csv;
mod oracle;
mod sweep;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::maximize::{maximize, Selection, SolverConfig};
use crate::network::{build_problem, InterferenceNetwork, PowerModel, ProblemSpec, SumPower};
use crate::sit::{minimize_sit, PowerSumReducer, SitConfig};
use crate::solution::{Solution, Status};

pub use config::parse_config;
pub use csv::{format_sig, write_csvs};
pub use oracle::{brute_force_grid, GridOptimum};
pub use sweep::{run_sweep, InstanceResult, RelativePower, StrategyStats, SweepConfig, SweepOutput, SweepRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// Throughput maximization.
    Tp,
    /// Power minimization keeping `omega` of the maximum throughput.
    Htee,
    /// Global energy efficiency maximization.
    Gee,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Tp, Strategy::Htee, Strategy::Gee];

    pub fn key(self) -> &'static str {
        match self {
            Strategy::Tp => "tp",
            Strategy::Htee => "htee",
            Strategy::Gee => "gee",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tp" => Ok(Strategy::Tp),
            "htee" => Ok(Strategy::Htee),
            "gee" => Ok(Strategy::Gee),
            other => Err(Error::Config(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Per-instance solver settings in normalized units.
#[derive(Debug, Clone)]
pub struct InstanceConfig {
    pub omega: f64,
    /// Optimality tolerance: bit/s/Hz for TP, bit/J/Hz for GEE, fraction of
    /// the per-user budget for power minimization.
    pub eta: f64,
    /// Essential-feasibility margin of the minimizer, bit/s/Hz.
    pub eps: f64,
    /// Candidate acceptance slack of the maximizer, bit/s/Hz.
    pub eps_feas: f64,
    /// Per-user rate floor, bit/s.
    pub r_min: f64,
    pub node_budget: u64,
    pub sit_node_budget: u64,
    pub time_budget: Option<Duration>,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        Self {
            omega: 0.95,
            eta: 0.01,
            eps: 1e-5,
            eps_feas: 1e-9,
            r_min: 0.0,
            node_budget: 5_000_000,
            sit_node_budget: 10_000_000,
            time_budget: None,
        }
    }
}

impl InstanceConfig {
    /// Maximizer settings for the given network, rates in bit/s.
    pub fn rate_solver(&self, net: &InterferenceNetwork) -> SolverConfig {
        SolverConfig {
            eta: self.eta * net.bandwidth(),
            eps_feas: self.eps_feas * net.bandwidth(),
            node_budget: self.node_budget,
            selection: Selection::BestFirst,
            time_budget: self.time_budget,
        }
    }

    /// Minimizer settings; the power tolerance scales with the mean budget.
    pub fn power_solver(&self, net: &InterferenceNetwork, p_max: &[f64]) -> SitConfig {
        let budget = p_max.iter().sum::<f64>() / p_max.len() as f64;
        SitConfig {
            eps: self.eps * net.bandwidth(),
            eta: self.eta * budget,
            node_budget: self.sit_node_budget,
            time_budget: self.time_budget,
        }
    }
}

/// Outcome of one strategy on one network.
#[derive(Debug, Clone)]
pub struct InstanceMetrics {
    pub strategy: Strategy,
    pub status: Status,
    pub point: Option<Vec<f64>>,
    /// bit/s
    pub sum_rate: f64,
    /// bit/J
    pub gee: f64,
    /// W
    pub total_power: f64,
    pub nodes: u64,
    pub wall_time: Duration,
    pub network: u64,
}

impl InstanceMetrics {
    pub fn solved(&self) -> bool {
        self.status == Status::Optimal
    }

    fn from_solution(strategy: Strategy, sol: &Solution, net: &InterferenceNetwork, pm: &PowerModel) -> Result<Self> {
        let (sum_rate, gee, total_power) = match &sol.point {
            Some(p) => (net.sum_rate(p)?, net.gee(pm, p)?, p.iter().sum()),
            None => (f64::NAN, f64::NAN, f64::NAN),
        };
        Ok(Self {
            strategy,
            status: sol.status,
            point: sol.point.clone(),
            sum_rate,
            gee,
            total_power,
            nodes: sol.nodes,
            wall_time: sol.wall_time,
            network: net.fingerprint(),
        })
    }
}

fn uniform_floors(net: &InterferenceNetwork, r_min: f64) -> Vec<f64> {
    vec![r_min; net.users()]
}

pub fn solve_tp(net: &InterferenceNetwork, pm: &PowerModel, p_max: &[f64], cfg: &InstanceConfig) -> Result<Solution> {
    let spec = ProblemSpec::tp_max(p_max.to_vec()).with_r_min(uniform_floors(net, cfg.r_min));
    let prob = build_problem(net, pm, &spec)?;
    maximize(&prob.objective, &prob.constraint, &prob.domain, &cfg.rate_solver(net))
}

pub fn solve_gee(net: &InterferenceNetwork, pm: &PowerModel, p_max: &[f64], cfg: &InstanceConfig) -> Result<Solution> {
    let spec = ProblemSpec::gee_max(p_max.to_vec()).with_r_min(uniform_floors(net, cfg.r_min));
    let prob = build_problem(net, pm, &spec)?;
    maximize(&prob.objective, &prob.constraint, &prob.domain, &cfg.rate_solver(net))
}

/// Power minimization given a solved throughput problem. The throughput
/// optimal point seeds the incumbent.
pub fn solve_htee(
    net: &InterferenceNetwork,
    pm: &PowerModel,
    p_max: &[f64],
    cfg: &InstanceConfig,
    tp: &Solution,
) -> Result<Solution> {
    let (Some(r_star), Some(tp_point)) = (tp.value, tp.point.as_deref()) else {
        return Err(Error::Config("power minimization needs a throughput optimum".into()));
    };
    let spec = ProblemSpec::pmin_htee(p_max.to_vec(), cfg.omega, r_star).with_r_min(uniform_floors(net, cfg.r_min));
    let prob = build_problem(net, pm, &spec)?;
    minimize_sit(
        &SumPower { users: net.users() },
        &prob.constraint,
        &prob.domain,
        &PowerSumReducer,
        &cfg.power_solver(net, p_max),
        Some(tp_point),
    )
}

/// Solve a single strategy from scratch.
pub fn solve_instance(
    strategy: Strategy,
    net: &InterferenceNetwork,
    pm: &PowerModel,
    p_max: &[f64],
    cfg: &InstanceConfig,
) -> Result<InstanceMetrics> {
    Ok(solve_strategies(&[strategy], net, pm, p_max, cfg)?
        .pop()
        .expect("one strategy requested"))
}

/// Solve several strategies on the same network; the throughput problem is
/// solved once and shared with HTEE. Output order follows `strategies`.
pub fn solve_strategies(
    strategies: &[Strategy],
    net: &InterferenceNetwork,
    pm: &PowerModel,
    p_max: &[f64],
    cfg: &InstanceConfig,
) -> Result<Vec<InstanceMetrics>> {
    let needs_tp = strategies.iter().any(|s| matches!(s, Strategy::Tp | Strategy::Htee));
    let tp = needs_tp.then(|| solve_tp(net, pm, p_max, cfg)).transpose()?;
    strategies
        .iter()
        .map(|&s| match s {
            Strategy::Tp => InstanceMetrics::from_solution(s, tp.as_ref().expect("solved"), net, pm),
            Strategy::Gee => InstanceMetrics::from_solution(s, &solve_gee(net, pm, p_max, cfg)?, net, pm),
            Strategy::Htee => {
                let tp = tp.as_ref().expect("solved");
                if tp.status != Status::Optimal {
                    let mut failed = InstanceMetrics::from_solution(s, tp, net, pm)?;
                    failed.status = if tp.status == Status::Infeasible {
                        Status::Infeasible
                    } else {
                        Status::BudgetExhausted
                    };
                    failed.point = None;
                    return Ok(failed);
                }
                let sol = solve_htee(net, pm, p_max, cfg, tp)?;
                InstanceMetrics::from_solution(s, &sol, net, pm)
            }
        })
        .collect()
}

/// `10^((dBm - 30) / 10)` W.
pub fn dbm_to_watt(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}
