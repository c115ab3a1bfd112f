//! Successive incumbent transcending (SIT) branch-and-bound for
//!
//! ```text
//! min f(x)  s.t.  g(x) <= 0,  x in M0
//! ```
//!
//! with `f` nondecreasing and `g` given through an MM representation `G`.
//! Instead of bounding `f`, every box is checked for the existence of an
//! essentially feasible point (`G(r, s) <= -eps`) whose objective beats the
//! current threshold `gamma = f(incumbent) - eta`. Boxes are processed oldest
//! first and shrunk against `gamma` before they are bounded.

use std::io::Write;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::fringe::{Fringe, Node, OldestFirst};
use crate::mm::{bisect, finite, lower_bound_min, Hyperrect, MixedMonotonic};
use crate::network::SumPower;
use crate::solution::{Solution, Status};

/// A nondecreasing objective.
pub trait MonotoneObjective {
    fn arity(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;
}

impl MonotoneObjective for SumPower {
    fn arity(&self) -> usize {
        self.users
    }
    fn eval(&self, x: &[f64]) -> f64 {
        x.iter().sum()
    }
}

/// Shrinks a box without losing any point that satisfies `f(x) <= gamma`.
/// Returns `None` when no such point is left.
pub trait BoxReducer {
    fn reduce(&self, region: Hyperrect, gamma: f64) -> Option<Hyperrect>;
}

/// Leaves boxes untouched apart from dropping those whose lower corner is
/// already above the threshold.
pub struct NoReduction<'a, F: ?Sized>(pub &'a F);

impl<F: MonotoneObjective + ?Sized> BoxReducer for NoReduction<'_, F> {
    fn reduce(&self, region: Hyperrect, gamma: f64) -> Option<Hyperrect> {
        (self.0.eval(region.lower()) <= gamma).then_some(region)
    }
}

/// Reduction for `f(p) = sum_i p_i`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PowerSumReducer;

impl BoxReducer for PowerSumReducer {
    fn reduce(&self, region: Hyperrect, gamma: f64) -> Option<Hyperrect> {
        reduce_box_powersum(&region, gamma)
    }
}

/// `[r, s']` with `s'_i = min(s_i, gamma - sum_{j != i} r_j)`, or `None` if
/// some `s'_i < r_i`.
pub fn reduce_box_powersum(region: &Hyperrect, gamma: f64) -> Option<Hyperrect> {
    let mut reduced = region.clone();
    let r = region.lower();
    for (i, s) in reduced.upper_mut().iter_mut().enumerate() {
        let others: f64 = r.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v).sum();
        *s = s.min(gamma - others);
        if *s < r[i] {
            return None;
        }
    }
    Some(reduced)
}

#[derive(Debug, Clone)]
pub struct SitConfig {
    /// Essential-feasibility margin on the constraint.
    pub eps: f64,
    /// Required objective improvement per incumbent update.
    pub eta: f64,
    pub node_budget: u64,
    pub time_budget: Option<Duration>,
}

impl Default for SitConfig {
    fn default() -> Self {
        Self {
            eps: 1e-5,
            eta: 0.01,
            node_budget: 10_000_000,
            time_budget: None,
        }
    }
}

impl SitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(Error::Config(format!("eps must be positive, got {}", self.eps)));
        }
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(Error::Config(format!("eta must be positive, got {}", self.eta)));
        }
        if self.node_budget == 0 {
            return Err(Error::Config("node budget must be positive".into()));
        }
        Ok(())
    }
}

/// Solver state between iterations.
#[derive(Debug)]
pub struct SitState {
    pub active: OldestFirst,
    pub incumbent: Option<Vec<f64>>,
    pub gamma: f64,
    pub k: u64,
}

/// Per-iteration record, emitted after the pruning step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationTrace {
    pub k: u64,
    pub active: usize,
    pub gamma: f64,
    /// Children emptied by the reduction step.
    pub reduced_away: usize,
    pub pruned_objective: usize,
    pub pruned_constraint: usize,
    pub incumbent_updated: bool,
}

impl IterationTrace {
    pub fn write_line(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(
            w,
            "k={} active={} gamma={:.9e} reduced={} pruned_f={} pruned_g={}{}",
            self.k,
            self.active,
            self.gamma,
            self.reduced_away,
            self.pruned_objective,
            self.pruned_constraint,
            if self.incumbent_updated { " incumbent" } else { "" }
        )
    }
}

pub fn minimize_sit<F, G, R>(
    objective: &F,
    constraint: &G,
    domain: &Hyperrect,
    reducer: &R,
    cfg: &SitConfig,
    warm_start: Option<&[f64]>,
) -> Result<Solution>
where
    F: MonotoneObjective + ?Sized,
    G: MixedMonotonic + ?Sized,
    R: BoxReducer + ?Sized,
{
    minimize_sit_traced(objective, constraint, domain, reducer, cfg, warm_start, None)
}

/// As [`minimize_sit`], writing one trace line per iteration to `log`.
pub fn minimize_sit_logged<F, G, R>(
    objective: &F,
    constraint: &G,
    domain: &Hyperrect,
    reducer: &R,
    cfg: &SitConfig,
    warm_start: Option<&[f64]>,
    log: &mut dyn Write,
) -> Result<Solution>
where
    F: MonotoneObjective + ?Sized,
    G: MixedMonotonic + ?Sized,
    R: BoxReducer + ?Sized,
{
    let mut io_err = None;
    let mut sink = |t: &IterationTrace| {
        if io_err.is_none() {
            io_err = t.write_line(log).err();
        }
    };
    let sol = minimize_sit_traced(objective, constraint, domain, reducer, cfg, warm_start, Some(&mut sink))?;
    match io_err {
        Some(e) => Err(e.into()),
        None => Ok(sol),
    }
}

pub fn minimize_sit_traced<F, G, R>(
    objective: &F,
    constraint: &G,
    domain: &Hyperrect,
    reducer: &R,
    cfg: &SitConfig,
    warm_start: Option<&[f64]>,
    mut trace: Option<&mut dyn FnMut(&IterationTrace)>,
) -> Result<Solution>
where
    F: MonotoneObjective + ?Sized,
    G: MixedMonotonic + ?Sized,
    R: BoxReducer + ?Sized,
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
    let start = Instant::now();
    let f = |x: &[f64]| finite(objective.eval(x), "objective evaluation");

    let mut state = SitState {
        active: OldestFirst::new(),
        incumbent: None,
        // without a feasible start, any threshold above every attainable
        // objective value will do
        gamma: f(domain.upper())?,
        k: 0,
    };
    if let Some(x0) = warm_start {
        let usable = domain.contains(x0) && constraint.diagonal(x0) <= 0.0;
        if usable {
            state.gamma = f(x0)? - cfg.eta;
            state.incumbent = Some(x0.to_vec());
        } else {
            log::debug!("ignoring warm start outside the feasible set");
        }
    }
    state.active.push(Node {
        region: domain.clone(),
        bound: f(domain.lower())?,
    });

    let mut exhausted = false;
    let mut children: Vec<Hyperrect> = Vec::with_capacity(2);
    while !state.active.is_empty() {
        if state.k >= cfg.node_budget {
            exhausted = true;
            break;
        }
        if let Some(limit) = cfg.time_budget {
            if state.k.is_multiple_of(256) && start.elapsed() >= limit {
                exhausted = true;
                break;
            }
        }
        let Some(node) = state.active.pop() else { break };
        // stale: gamma has moved past this box since it was stored
        if node.bound >= state.gamma {
            continue;
        }
        state.k += 1;

        // Branching
        let (lo, hi) = match bisect(&node.region) {
            Ok(pair) => pair,
            Err(Error::DegenerateBox) => continue,
            Err(e) => return Err(e),
        };

        // Reduction
        children.clear();
        let mut reduced_away = 0;
        for child in [lo, hi] {
            match reducer.reduce(child, state.gamma) {
                Some(c) => children.push(c),
                None => reduced_away += 1,
            }
        }

        // Incumbent: lower corners that are feasible, best objective first
        let mut best: Option<(usize, f64)> = None;
        for (idx, c) in children.iter().enumerate() {
            let g = finite(constraint.diagonal(c.lower()), "constraint evaluation")?;
            if g <= 0.0 {
                let v = f(c.lower())?;
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((idx, v));
                }
            }
        }
        let mut updated = false;
        if let Some((idx, v)) = best {
            let improves = match &state.incumbent {
                None => true,
                Some(x) => v < f(x)?,
            };
            if improves {
                state.incumbent = Some(children[idx].lower().to_vec());
                state.gamma = v - cfg.eta;
                updated = true;
            }
        }

        // Pruning
        let (mut pruned_f, mut pruned_g) = (0, 0);
        for c in children.drain(..) {
            let fr = f(c.lower())?;
            if fr >= state.gamma {
                pruned_f += 1;
            } else if lower_bound_min(constraint, &c)? > -cfg.eps {
                pruned_g += 1;
            } else {
                state.active.push(Node { region: c, bound: fr });
            }
        }

        if let Some(t) = trace.as_mut() {
            t(&IterationTrace {
                k: state.k,
                active: state.active.len(),
                gamma: state.gamma,
                reduced_away,
                pruned_objective: pruned_f,
                pruned_constraint: pruned_g,
                incumbent_updated: updated,
            });
        }
    }

    let status = match (&state.incumbent, exhausted) {
        (_, true) => Status::BudgetExhausted,
        (Some(_), false) => Status::Optimal,
        (None, false) => Status::Infeasible,
    };
    let value = state.incumbent.as_deref().map(f).transpose()?;
    Ok(Solution {
        status,
        value,
        bound: state.incumbent.as_ref().map(|_| state.gamma),
        point: state.incumbent,
        nodes: state.k,
        wall_time: start.elapsed(),
    })
}
