use std::time::Duration;

use rayon::prelude::*;

use super::{dbm_to_watt, solve_gee, solve_strategies, InstanceConfig, InstanceMetrics, Strategy};
use crate::error::{Error, Result};
use crate::network::InterferenceNetwork;
use crate::network::PowerModel;
use crate::scenario::{generate_indexed, ScenarioParams};
use crate::solution::{Solution, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelativePower {
    /// `mean(P_s) / mean(P_tp)`.
    RatioOfAverages,
    /// `mean(P_s / P_tp)`.
    AverageOfRatios,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub p_dbm: Vec<f64>,
    pub omega: f64,
    pub realizations: usize,
    pub master_seed: u64,
    pub strategies: Vec<Strategy>,
    pub eta: f64,
    pub eps: f64,
    /// Per-user rate floor, bit/s.
    pub r_min: f64,
    pub node_budget: u64,
    pub sit_node_budget: u64,
    pub time_budget: Option<Duration>,
    pub relative_power: RelativePower,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Reuse a GEE optimum from a larger budget whenever it fits the smaller
    /// one. Such a point stays optimal because the feasible set only shrank.
    pub reuse_gee: bool,
    pub scenario: ScenarioParams,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            p_dbm: (0..=25).map(|k| -20.0 + 2.0 * k as f64).collect(),
            omega: 0.95,
            realizations: 1000,
            master_seed: 1,
            strategies: Strategy::ALL.to_vec(),
            eta: 0.01,
            eps: 1e-5,
            r_min: 0.0,
            node_budget: 5_000_000,
            sit_node_budget: 10_000_000,
            time_budget: None,
            relative_power: RelativePower::RatioOfAverages,
            threads: None,
            reuse_gee: true,
            scenario: ScenarioParams::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p_dbm.is_empty() {
            return Err(Error::Config("empty power sweep".into()));
        }
        if self.p_dbm.iter().any(|p| !p.is_finite()) {
            return Err(Error::Config("non-finite power budget".into()));
        }
        if self.realizations == 0 {
            return Err(Error::Config("need at least one realization".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::Config("no strategies selected".into()));
        }
        if !(0.0..=1.0).contains(&self.omega) {
            return Err(Error::Config(format!("omega {} outside [0, 1]", self.omega)));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        self.scenario.validate()
    }

    pub fn instance(&self) -> InstanceConfig {
        InstanceConfig {
            omega: self.omega,
            eta: self.eta,
            eps: self.eps,
            r_min: self.r_min,
            node_budget: self.node_budget,
            sit_node_budget: self.sit_node_budget,
            time_budget: self.time_budget,
            ..InstanceConfig::default()
        }
    }

    /// Requested strategies in canonical order.
    fn ordered_strategies(&self) -> Vec<Strategy> {
        let mut s = self.strategies.clone();
        s.sort();
        s.dedup();
        s
    }
}

/// Averages of one strategy at one power budget.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyStats {
    pub throughput_mbps: f64,
    pub gee_mbit_per_j: f64,
    pub total_power_w: f64,
    /// Percent of the throughput-optimal transmit power; NaN without TP.
    pub relative_power_pct: f64,
    pub mean_nodes: f64,
    pub mean_wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub p_dbm: f64,
    pub stats: Vec<(Strategy, StrategyStats)>,
    /// Realizations that entered the averages.
    pub used: usize,
    /// Realizations excluded because some strategy failed.
    pub failed: usize,
}

impl SweepRecord {
    pub fn get(&self, s: Strategy) -> Option<&StrategyStats> {
        self.stats.iter().find(|(k, _)| *k == s).map(|(_, v)| v)
    }
}

#[derive(Debug, Clone)]
pub struct InstanceResult {
    pub p_dbm: f64,
    pub realization: usize,
    pub outcome: std::result::Result<Vec<InstanceMetrics>, String>,
}

impl InstanceResult {
    pub fn get(&self, s: Strategy) -> Option<&InstanceMetrics> {
        self.outcome.as_ref().ok()?.iter().find(|m| m.strategy == s)
    }

    fn usable(&self) -> bool {
        self.outcome
            .as_ref()
            .is_ok_and(|m| m.iter().all(InstanceMetrics::solved))
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub records: Vec<SweepRecord>,
    pub instances: Vec<InstanceResult>,
    /// Fingerprint of the network used for each realization.
    pub networks: Vec<u64>,
}

/// Solve every strategy for every (budget, realization) pair and average.
///
/// Realization `k` uses the same network at every budget. Results do not
/// depend on the number of worker threads.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(|| sweep_inner(cfg)),
        None => sweep_inner(cfg),
    }
}

fn sweep_inner(cfg: &SweepConfig) -> Result<SweepOutput> {
    let pm = cfg.scenario.power_model()?;
    let networks: Vec<InterferenceNetwork> = (0..cfg.realizations as u64)
        .into_par_iter()
        .map(|k| generate_indexed(cfg.master_seed, k, &cfg.scenario).map(|(_, net)| net))
        .collect::<Result<_>>()?;

    let strategies = cfg.ordered_strategies();
    // HTEE needs the TP solution anyway, so TP is always reported alongside
    let mut solved_set = strategies.clone();
    if strategies.contains(&Strategy::Htee) && !strategies.contains(&Strategy::Tp) {
        solved_set.insert(0, Strategy::Tp);
    }
    // budgets of one realization run largest first so GEE optima can be reused
    let mut order: Vec<usize> = (0..cfg.p_dbm.len()).collect();
    order.sort_by(|&a, &b| cfg.p_dbm[b].total_cmp(&cfg.p_dbm[a]));
    let per_realization: Vec<Vec<(usize, InstanceResult)>> = (0..cfg.realizations)
        .into_par_iter()
        .map(|k| {
            let mut gee_hint: Option<Solution> = None;
            order
                .iter()
                .map(|&b| {
                    let p_dbm = cfg.p_dbm[b];
                    let outcome = solve_budget(cfg, &networks[k], &pm, &solved_set, p_dbm, &mut gee_hint);
                    match &outcome {
                        Err(e) => log::warn!("budget {p_dbm} dBm, realization {k}: {e}"),
                        Ok(m) => {
                            for x in m.iter().filter(|x| !x.solved()) {
                                log::warn!(
                                    "budget {p_dbm} dBm, realization {k}: {} ended {:?}",
                                    x.strategy,
                                    x.status
                                );
                            }
                        }
                    }
                    (
                        b,
                        InstanceResult {
                            p_dbm,
                            realization: k,
                            outcome,
                        },
                    )
                })
                .collect()
        })
        .collect();
    let mut slots: Vec<Option<InstanceResult>> = vec![None; cfg.p_dbm.len() * cfg.realizations];
    for (k, results) in per_realization.into_iter().enumerate() {
        for (b, r) in results {
            slots[b * cfg.realizations + k] = Some(r);
        }
    }
    let instances: Vec<InstanceResult> = slots.into_iter().map(|r| r.expect("every pair solved")).collect();

    let records = instances
        .chunks(cfg.realizations)
        .map(|chunk| aggregate(chunk, &solved_set, cfg.relative_power))
        .collect();
    for r in &records {
        let r: &SweepRecord = r;
        log::info!(
            "{} dBm: {} realizations averaged, {} excluded",
            r.p_dbm,
            r.used,
            r.failed
        );
    }

    Ok(SweepOutput {
        records,
        instances,
        networks: networks.iter().map(InterferenceNetwork::fingerprint).collect(),
    })
}

fn solve_budget(
    cfg: &SweepConfig,
    net: &InterferenceNetwork,
    pm: &PowerModel,
    strategies: &[Strategy],
    p_dbm: f64,
    gee_hint: &mut Option<Solution>,
) -> std::result::Result<Vec<InstanceMetrics>, String> {
    let inst = cfg.instance();
    let p_max = vec![dbm_to_watt(p_dbm); net.users()];
    let others: Vec<Strategy> = strategies.iter().copied().filter(|&s| s != Strategy::Gee).collect();
    let mut metrics = solve_strategies(&others, net, pm, &p_max, &inst).map_err(|e| e.to_string())?;
    if strategies.contains(&Strategy::Gee) {
        let fits = |sol: &Solution| {
            sol.point
                .as_ref()
                .is_some_and(|p| p.iter().zip(&p_max).all(|(x, cap)| x <= cap))
        };
        let gee = match gee_hint.as_ref().filter(|s| cfg.reuse_gee && fits(s)) {
            Some(hint) => Solution {
                nodes: 0,
                wall_time: Duration::ZERO,
                ..hint.clone()
            },
            None => {
                let sol = solve_gee(net, pm, &p_max, &inst).map_err(|e| e.to_string())?;
                if sol.status == Status::Optimal {
                    *gee_hint = Some(sol.clone());
                }
                sol
            }
        };
        let m = InstanceMetrics::from_solution(Strategy::Gee, &gee, net, pm).map_err(|e| e.to_string())?;
        let at = strategies.iter().position(|&s| s == Strategy::Gee).expect("present");
        metrics.insert(at, m);
    }
    Ok(metrics)
}

fn aggregate(chunk: &[InstanceResult], strategies: &[Strategy], mode: RelativePower) -> SweepRecord {
    let p_dbm = chunk[0].p_dbm;
    let usable: Vec<&InstanceResult> = chunk.iter().filter(|r| r.usable()).collect();
    let n = usable.len() as f64;
    let mean = |s: Strategy, f: &dyn Fn(&InstanceMetrics) -> f64| {
        usable
            .iter()
            .map(|r| f(r.get(s).expect("solved strategy")))
            .sum::<f64>()
            / n
    };
    let has_tp = strategies.contains(&Strategy::Tp);
    let tp_power = if has_tp {
        mean(Strategy::Tp, &|m| m.total_power)
    } else {
        f64::NAN
    };

    let stats = strategies
        .iter()
        .map(|&s| {
            let total_power_w = mean(s, &|m| m.total_power);
            let relative_power_pct = match (has_tp, mode) {
                (false, _) => f64::NAN,
                (true, RelativePower::RatioOfAverages) => 100.0 * total_power_w / tp_power,
                (true, RelativePower::AverageOfRatios) => {
                    let ratios: Vec<f64> = usable
                        .iter()
                        .filter_map(|r| {
                            let tp = r.get(Strategy::Tp)?.total_power;
                            let own = r.get(s)?.total_power;
                            (tp > 0.0).then(|| 100.0 * own / tp)
                        })
                        .collect();
                    ratios.iter().sum::<f64>() / ratios.len() as f64
                }
            };
            let wall: Duration = usable.iter().map(|r| r.get(s).expect("solved").wall_time).sum();
            (
                s,
                StrategyStats {
                    throughput_mbps: mean(s, &|m| m.sum_rate) / 1e6,
                    gee_mbit_per_j: mean(s, &|m| m.gee) / 1e6,
                    total_power_w,
                    relative_power_pct,
                    mean_nodes: mean(s, &|m| m.nodes as f64),
                    mean_wall_time: if usable.is_empty() {
                        Duration::ZERO
                    } else {
                        wall / usable.len() as u32
                    },
                },
            )
        })
        .collect();

    SweepRecord {
        p_dbm,
        stats,
        used: usable.len(),
        failed: chunk.len() - usable.len(),
    }
}
