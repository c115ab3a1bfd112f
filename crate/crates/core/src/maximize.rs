//! Branch-and-bound maximization of an MM objective under one MM inequality
//! constraint `G(x, x) <= 0`.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::fringe::{BestFirst, Fringe, Node, OldestFirst};
use crate::mm::{bisect, finite, lower_bound_min, upper_bound_max, Hyperrect, MixedMonotonic};
use crate::solution::{Solution, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    BestFirst,
    OldestFirst,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Absolute optimality tolerance, in objective units.
    pub eta: f64,
    /// Constraint slack for accepting a candidate, in constraint units.
    pub eps_feas: f64,
    pub node_budget: u64,
    pub selection: Selection,
    pub time_budget: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eta: 0.01,
            eps_feas: 1e-9,
            node_budget: 5_000_000,
            selection: Selection::BestFirst,
            time_budget: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::Config(format!("eta must be positive, got {}", self.eta)));
        }
        if !(self.eps_feas.is_finite() && self.eps_feas >= 0.0) {
            return Err(Error::Config(format!(
                "eps_feas must be nonnegative, got {}",
                self.eps_feas
            )));
        }
        if self.node_budget == 0 {
            return Err(Error::Config("node budget must be positive".into()));
        }
        Ok(())
    }
}

/// Snapshot handed to an observer after every processed box.
#[derive(Debug, Clone, Copy)]
pub struct Progress {
    pub nodes: u64,
    pub active: usize,
    pub incumbent: Option<f64>,
    /// Largest bound among stored boxes and boxes dropped for optimality.
    pub bound: f64,
}

pub fn maximize<F, G>(objective: &F, constraint: &G, domain: &Hyperrect, cfg: &SolverConfig) -> Result<Solution>
where
    F: MixedMonotonic + ?Sized,
    G: MixedMonotonic + ?Sized,
{
    maximize_observed(objective, constraint, domain, cfg, None)
}

pub fn maximize_observed<F, G>(
    objective: &F,
    constraint: &G,
    domain: &Hyperrect,
    cfg: &SolverConfig,
    observer: Option<&mut dyn FnMut(&Progress)>,
) -> Result<Solution>
where
    F: MixedMonotonic + ?Sized,
    G: MixedMonotonic + ?Sized,
{
    cfg.validate()?;
    for arity in [objective.arity(), constraint.arity()] {
        if arity != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                got: arity,
            });
        }
    }
    let search = Search {
        objective,
        constraint,
        cfg,
        incumbent: None,
        dropped: f64::NEG_INFINITY,
    };
    match cfg.selection {
        Selection::BestFirst => search.run(BestFirst::new(), domain, observer),
        Selection::OldestFirst => search.run(OldestFirst::new(), domain, observer),
    }
}

struct Search<'a, F: ?Sized, G: ?Sized> {
    objective: &'a F,
    constraint: &'a G,
    cfg: &'a SolverConfig,
    incumbent: Option<(Vec<f64>, f64)>,
    /// Running max of the bounds of boxes discarded because they cannot beat
    /// the incumbent by more than eta.
    dropped: f64,
}

impl<F, G> Search<'_, F, G>
where
    F: MixedMonotonic + ?Sized,
    G: MixedMonotonic + ?Sized,
{
    fn threshold(&self) -> f64 {
        self.incumbent
            .as_ref()
            .map_or(f64::NEG_INFINITY, |(_, v)| v + self.cfg.eta)
    }

    fn consider(&mut self, p: &[f64]) -> Result<()> {
        if !self.constraint.never_positive() {
            let g = finite(self.constraint.diagonal(p), "constraint evaluation")?;
            if g > self.cfg.eps_feas {
                return Ok(());
            }
        }
        let v = finite(self.objective.diagonal(p), "objective evaluation")?;
        if self.incumbent.as_ref().is_none_or(|(_, best)| v > *best) {
            self.incumbent = Some((p.to_vec(), v));
        }
        Ok(())
    }

    /// Bound a box; `None` when the constraint rules it out.
    fn bound(&self, region: &Hyperrect) -> Result<Option<f64>> {
        if !self.constraint.never_positive() && lower_bound_min(self.constraint, region)? > 0.0 {
            return Ok(None);
        }
        upper_bound_max(self.objective, region).map(Some)
    }

    fn run<Q: Fringe>(
        mut self,
        mut fringe: Q,
        domain: &Hyperrect,
        mut observer: Option<&mut dyn FnMut(&Progress)>,
    ) -> Result<Solution> {
        let start = Instant::now();
        let mut nodes = 0u64;
        let mut exhausted = false;

        if let Some(ub) = self.bound(domain)? {
            self.consider(domain.lower())?;
            self.consider(domain.upper())?;
            if ub > self.threshold() {
                fringe.push(Node {
                    region: domain.clone(),
                    bound: ub,
                });
            } else {
                self.dropped = ub;
            }
        }

        while !fringe.is_empty() {
            if nodes >= self.cfg.node_budget {
                exhausted = true;
                break;
            }
            if let Some(limit) = self.cfg.time_budget {
                if nodes.is_multiple_of(256) && start.elapsed() >= limit {
                    exhausted = true;
                    break;
                }
            }
            let Some(node) = fringe.pop() else { break };

            if node.bound <= self.threshold() {
                self.dropped = self.dropped.max(node.bound);
                continue;
            }
            nodes += 1;

            let (lo, hi) = match bisect(&node.region) {
                Ok(pair) => pair,
                // a single point: both corners were already evaluated
                Err(Error::DegenerateBox) => continue,
                Err(e) => return Err(e),
            };

            // M- shares its lower corner with the parent, M+ its upper corner.
            for (child, fresh_corner_is_upper) in [(lo, true), (hi, false)] {
                let Some(ub) = self.bound(&child)? else {
                    continue;
                };
                if fresh_corner_is_upper {
                    self.consider(child.upper())?;
                } else {
                    self.consider(child.lower())?;
                }
                if ub > self.threshold() {
                    fringe.push(Node {
                        region: child,
                        bound: ub,
                    });
                } else {
                    self.dropped = self.dropped.max(ub);
                }
            }

            if let Some(obs) = observer.as_mut() {
                obs(&Progress {
                    nodes,
                    active: fringe.len(),
                    incumbent: self.incumbent.as_ref().map(|(_, v)| *v),
                    bound: fringe.max_bound().unwrap_or(f64::NEG_INFINITY).max(self.dropped),
                });
            }
        }

        let open = fringe.max_bound().unwrap_or(f64::NEG_INFINITY);
        let status = match (&self.incumbent, exhausted) {
            (_, true) => Status::BudgetExhausted,
            (Some(_), false) => Status::Optimal,
            (None, false) => Status::Infeasible,
        };
        let (point, value) = match self.incumbent {
            Some((p, v)) => (Some(p), Some(v)),
            None => (None, None),
        };
        let bound = self.dropped.max(open);
        let bound = match value {
            Some(v) => Some(bound.max(v)),
            None if bound.is_finite() => Some(bound),
            None => None,
        };
        Ok(Solution {
            status,
            point,
            value,
            bound,
            nodes,
            wall_time: start.elapsed(),
        })
    }
}
