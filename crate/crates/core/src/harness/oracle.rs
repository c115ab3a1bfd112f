use crate::error::{Error, Result};
use crate::network::{InterferenceNetwork, PowerModel, ProblemKind, ProblemSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct GridOptimum {
    pub point: Vec<f64>,
    /// Objective at `point`: sum rate, GEE, or total power.
    pub value: f64,
    /// Grid spacing per dimension.
    pub step: Vec<f64>,
}

/// Exhaustive search over the uniform grid on `[0, P]` with `points` values
/// per dimension. Test oracle only; works directly on the diagonal rate
/// formulas. Returns `None` when no grid point is feasible.
pub fn brute_force_grid(
    net: &InterferenceNetwork,
    pm: &PowerModel,
    spec: &ProblemSpec,
    points: usize,
) -> Result<Option<GridOptimum>> {
    let n = net.users();
    if n > 3 {
        return Err(Error::Precondition(format!("grid search limited to 3 users, got {n}")));
    }
    if points < 100 {
        return Err(Error::Precondition(format!(
            "need at least 100 grid points per dimension, got {points}"
        )));
    }
    spec.validate(n)?;

    let step: Vec<f64> = spec.p_max.iter().map(|p| p / (points - 1) as f64).collect();
    let sum_floor = match spec.kind {
        ProblemKind::PminHtee => spec.omega * spec.r_star.expect("validated"),
        _ => f64::NEG_INFINITY,
    };

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut idx = vec![0usize; n];
    let mut p = vec![0.0; n];
    loop {
        for i in 0..n {
            // exact end point at the top of the range
            p[i] = if idx[i] == points - 1 {
                spec.p_max[i]
            } else {
                idx[i] as f64 * step[i]
            };
        }
        let rates = net.rates(&p)?;
        let feasible = rates.iter().zip(&spec.r_min).all(|(r, m)| r >= m) && rates.iter().sum::<f64>() >= sum_floor;
        if feasible {
            let (value, better): (f64, fn(f64, f64) -> bool) = match spec.kind {
                ProblemKind::TpMax => (rates.iter().sum(), |a, b| a > b),
                ProblemKind::GeeMax => (rates.iter().sum::<f64>() / pm.consumed(&p)?, |a, b| a > b),
                ProblemKind::PminHtee => (p.iter().sum(), |a, b| a < b),
            };
            if best.as_ref().is_none_or(|(_, v)| better(value, *v)) {
                best = Some((p.clone(), value));
            }
        }

        let mut d = 0;
        loop {
            if d == n {
                return Ok(best.map(|(point, value)| GridOptimum { point, value, step }));
            }
            idx[d] += 1;
            if idx[d] < points {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}
