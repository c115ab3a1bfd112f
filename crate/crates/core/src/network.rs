//! Gaussian interference network: SINR, rates, GEE and the MM problem builders.
//!
//! Rates are `B * log2(1 + SINR)` in bit/s. Interference is treated as noise.

use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::mm::{Hyperrect, MixedMonotonic};

#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceNetwork {
    alpha: Vec<f64>,
    /// Row-major `n x n`; `beta[i * n + j]` is the gain from transmitter `j`
    /// into receiver `i`.
    beta: Vec<f64>,
    sigma2: Vec<f64>,
    bandwidth: f64,
}

impl InterferenceNetwork {
    pub fn new(alpha: Vec<f64>, beta: Vec<Vec<f64>>, sigma2: Vec<f64>, bandwidth: f64) -> Result<Self> {
        let n = alpha.len();
        if n == 0 {
            return Err(Error::InvalidNetwork("no users".into()));
        }
        if sigma2.len() != n || beta.len() != n || beta.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidNetwork(format!("inconsistent dimensions for {n} users")));
        }
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::InvalidNetwork(format!(
                "bandwidth must be positive, got {bandwidth}"
            )));
        }
        for i in 0..n {
            if !(alpha[i].is_finite() && alpha[i] > 0.0) {
                return Err(Error::InvalidNetwork(format!(
                    "alpha[{i}] = {} must be positive",
                    alpha[i]
                )));
            }
            if !(sigma2[i].is_finite() && sigma2[i] > 0.0) {
                return Err(Error::InvalidNetwork(format!(
                    "sigma2[{i}] = {} must be positive",
                    sigma2[i]
                )));
            }
            for j in 0..n {
                let b = beta[i][j];
                if i == j && b != 0.0 {
                    return Err(Error::InvalidNetwork(format!("beta[{i}][{i}] must be zero")));
                }
                if !(b.is_finite() && b >= 0.0) {
                    return Err(Error::InvalidNetwork(format!(
                        "beta[{i}][{j}] = {b} must be nonnegative"
                    )));
                }
            }
        }
        Ok(Self {
            alpha,
            beta: beta.into_iter().flatten().collect(),
            sigma2,
            bandwidth,
        })
    }

    pub fn users(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self, i: usize, j: usize) -> f64 {
        self.beta[i * self.users() + j]
    }

    pub fn sigma2(&self) -> &[f64] {
        &self.sigma2
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Same channel with a different bandwidth.
    pub fn with_bandwidth(&self, bandwidth: f64) -> Result<Self> {
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(Error::InvalidNetwork(format!(
                "bandwidth must be positive, got {bandwidth}"
            )));
        }
        Ok(Self {
            bandwidth,
            ..self.clone()
        })
    }

    /// Network restricted to the listed users, in the given order.
    pub fn subnetwork(&self, users: &[usize]) -> Result<Self> {
        if users.iter().any(|&u| u >= self.users()) {
            return Err(Error::InvalidNetwork("user index out of range".into()));
        }
        let alpha = users.iter().map(|&u| self.alpha[u]).collect();
        let sigma2 = users.iter().map(|&u| self.sigma2[u]).collect();
        let beta = users
            .iter()
            .map(|&i| {
                users
                    .iter()
                    .map(|&j| if i == j { 0.0 } else { self.beta(i, j) })
                    .collect()
            })
            .collect();
        Self::new(alpha, beta, sigma2, self.bandwidth)
    }

    /// Interference plus noise at receiver `i` when the others transmit `y`.
    #[inline]
    pub(crate) fn interference(&self, i: usize, y: &[f64]) -> f64 {
        let n = self.users();
        let row = &self.beta[i * n..(i + 1) * n];
        let mut acc = self.sigma2[i];
        for (j, (&b, &p)) in row.iter().zip(y).enumerate() {
            if j != i {
                acc += b * p;
            }
        }
        acc
    }

    /// `B log2(1 + alpha_i x_i / (sum_{j != i} beta_ij y_j + sigma_i^2))`.
    #[inline]
    pub(crate) fn rate_term(&self, i: usize, x: &[f64], y: &[f64]) -> f64 {
        self.bandwidth * (self.alpha[i] * x[i] / self.interference(i, y)).ln_1p() * std::f64::consts::LOG2_E
    }

    /// `sum_i rate_term(i, x, y)` with a single logarithm.
    pub(crate) fn sum_rate_term(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut bits = 0.0;
        let mut prod = 1.0;
        for i in 0..self.users() {
            prod *= 1.0 + self.alpha[i] * x[i] / self.interference(i, y);
            // keep the running product far from overflow
            if prod > 1e150 {
                bits += prod.log2();
                prod = 1.0;
            }
        }
        self.bandwidth * (bits + prod.log2())
    }

    fn check_power(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.users() {
            return Err(Error::DimensionMismatch {
                expected: self.users(),
                got: p.len(),
            });
        }
        if let Some((j, v)) = p.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Precondition(format!(
                "power p[{j}] = {v} must be finite and nonnegative"
            )));
        }
        Ok(())
    }

    pub fn sinr(&self, p: &[f64], i: usize) -> Result<f64> {
        self.check_power(p)?;
        if i >= self.users() {
            return Err(Error::Precondition(format!("user index {i} out of range")));
        }
        Ok(self.alpha[i] * p[i] / self.interference(i, p))
    }

    pub fn rate(&self, p: &[f64], i: usize) -> Result<f64> {
        Ok(self.bandwidth * (1.0 + self.sinr(p, i)?).log2())
    }

    pub fn rates(&self, p: &[f64]) -> Result<Vec<f64>> {
        (0..self.users()).map(|i| self.rate(p, i)).collect()
    }

    pub fn sum_rate(&self, p: &[f64]) -> Result<f64> {
        Ok(self.rates(p)?.iter().sum())
    }

    /// Global energy efficiency in bit/J.
    pub fn gee(&self, pm: &PowerModel, p: &[f64]) -> Result<f64> {
        Ok(self.sum_rate(p)? / pm.consumed(p)?)
    }

    /// Stable fingerprint over the exact bit patterns of all parameters.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.users().hash(&mut h);
        for v in self.alpha.iter().chain(&self.beta).chain(&self.sigma2) {
            v.to_bits().hash(&mut h);
        }
        self.bandwidth.to_bits().hash(&mut h);
        h.finish()
    }

    /// Line-oriented text form: `n bandwidth`, alpha row, sigma2 row, then `n`
    /// beta rows, all in scientific notation with 17 significant digits.
    pub fn to_text(&self) -> String {
        let n = self.users();
        let mut out = String::new();
        let row = |out: &mut String, vals: &[f64]| {
            let line: Vec<String> = vals.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        };
        let _ = writeln!(out, "{n} {:.16e}", self.bandwidth);
        row(&mut out, &self.alpha);
        row(&mut out, &self.sigma2);
        for i in 0..n {
            row(&mut out, &self.beta[i * n..(i + 1) * n]);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let parse_row = |(line, s): (usize, &str)| -> Result<Vec<f64>> {
            s.split_whitespace()
                .map(|t| {
                    t.parse::<f64>().map_err(|e| Error::Parse {
                        line,
                        msg: format!("{t:?}: {e}"),
                    })
                })
                .collect()
        };
        let eof = || Error::Parse {
            line: 0,
            msg: "unexpected end of input".into(),
        };

        let (hline, header) = lines.next().ok_or_else(eof)?;
        let mut parts = header.split_whitespace();
        let n: usize = parts.next().and_then(|t| t.parse().ok()).ok_or_else(|| Error::Parse {
            line: hline,
            msg: "expected user count".into(),
        })?;
        let bandwidth: f64 = parts.next().and_then(|t| t.parse().ok()).ok_or_else(|| Error::Parse {
            line: hline,
            msg: "expected bandwidth".into(),
        })?;

        let mut read = |what: &str| -> Result<Vec<f64>> {
            let entry = lines.next().ok_or_else(eof)?;
            let line = entry.0;
            let v = parse_row(entry)?;
            if v.len() != n {
                return Err(Error::Parse {
                    line,
                    msg: format!("{what}: expected {n} values, got {}", v.len()),
                });
            }
            Ok(v)
        };
        let alpha = read("alpha")?;
        let sigma2 = read("sigma2")?;
        let beta = (0..n).map(|_| read("beta")).collect::<Result<Vec<_>>>()?;
        Self::new(alpha, beta, sigma2, bandwidth)
    }
}

/// Dissipated power model `sum_i mu_i p_i + P_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerModel {
    mu: Vec<f64>,
    p_static: f64,
}

impl PowerModel {
    pub fn new(mu: Vec<f64>, p_static: f64) -> Result<Self> {
        if !(p_static.is_finite() && p_static > 0.0) {
            return Err(Error::Config(format!("static power must be positive, got {p_static}")));
        }
        if mu.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::Config("amplifier inefficiencies must be nonnegative".into()));
        }
        Ok(Self { mu, p_static })
    }

    /// Identical amplifiers with the given drain efficiency in `(0, 1]`.
    pub fn uniform(users: usize, pa_efficiency: f64, p_static: f64) -> Result<Self> {
        if !(pa_efficiency > 0.0 && pa_efficiency <= 1.0) {
            return Err(Error::Config(format!("PA efficiency {pa_efficiency} outside (0, 1]")));
        }
        Self::new(vec![1.0 / pa_efficiency; users], p_static)
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn p_static(&self) -> f64 {
        self.p_static
    }

    #[inline]
    pub(crate) fn consumed_unchecked(&self, p: &[f64]) -> f64 {
        self.p_static + self.mu.iter().zip(p).map(|(m, v)| m * v).sum::<f64>()
    }

    pub fn consumed(&self, p: &[f64]) -> Result<f64> {
        if p.len() != self.mu.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mu.len(),
                got: p.len(),
            });
        }
        Ok(self.consumed_unchecked(p))
    }
}

/// `R_i(x, y)` for a single user.
#[derive(Debug, Clone)]
pub struct RateMm {
    net: InterferenceNetwork,
    user: usize,
}

impl MixedMonotonic for RateMm {
    fn arity(&self) -> usize {
        self.net.users()
    }
    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        self.net.rate_term(self.user, x, y)
    }
}

/// `sum_i R_i(x, y)`.
#[derive(Debug, Clone)]
pub struct SumRateMm {
    net: InterferenceNetwork,
}

impl SumRateMm {
    pub fn new(net: InterferenceNetwork) -> Self {
        Self { net }
    }
}

impl MixedMonotonic for SumRateMm {
    fn arity(&self) -> usize {
        self.net.users()
    }
    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        self.net.sum_rate_term(x, y)
    }
}

/// `sum_i R_i(x, y) / (sum_i mu_i y_i + P_c)`.
///
/// Powers in the numerator's signal terms come from `x`, everything that
/// hurts (interference and dissipated power) from `y`.
#[derive(Debug, Clone)]
pub struct GeeMm {
    net: InterferenceNetwork,
    power: PowerModel,
}

impl GeeMm {
    pub fn new(net: InterferenceNetwork, power: PowerModel) -> Result<Self> {
        if power.mu.len() != net.users() {
            return Err(Error::DimensionMismatch {
                expected: net.users(),
                got: power.mu.len(),
            });
        }
        Ok(Self { net, power })
    }
}

impl MixedMonotonic for GeeMm {
    fn arity(&self) -> usize {
        self.net.users()
    }
    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        self.net.sum_rate_term(x, y) / self.power.consumed_unchecked(y)
    }
}

/// `sum_i x_i`, the total transmit power.
#[derive(Debug, Clone, Copy)]
pub struct SumPower {
    pub users: usize,
}

impl MixedMonotonic for SumPower {
    fn arity(&self) -> usize {
        self.users
    }
    fn eval(&self, x: &[f64], _y: &[f64]) -> f64 {
        x.iter().sum()
    }
}

/// Merged rate constraint `G(x, y) <= 0` with
/// `G(x, y) = max{ floor - sum_i R_i(y, x), max_i { r_min_i - R_i(y, x) } }`.
///
/// The sum-rate term is present only when a floor is set.
#[derive(Debug, Clone)]
pub struct RateConstraint {
    net: InterferenceNetwork,
    sum_floor: Option<f64>,
    r_min: Vec<f64>,
}

impl RateConstraint {
    pub fn new(net: InterferenceNetwork, sum_floor: Option<f64>, r_min: Vec<f64>) -> Result<Self> {
        if r_min.len() != net.users() {
            return Err(Error::DimensionMismatch {
                expected: net.users(),
                got: r_min.len(),
            });
        }
        Ok(Self { net, sum_floor, r_min })
    }

    pub fn sum_floor(&self) -> Option<f64> {
        self.sum_floor
    }

    pub fn r_min(&self) -> &[f64] {
        &self.r_min
    }
}

impl MixedMonotonic for RateConstraint {
    fn arity(&self) -> usize {
        self.net.users()
    }
    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        let mut total = 0.0;
        for i in 0..self.net.users() {
            let r = self.net.rate_term(i, y, x);
            total += r;
            worst = worst.max(self.r_min[i] - r);
        }
        match self.sum_floor {
            Some(floor) => worst.max(floor - total),
            None => worst,
        }
    }

    fn never_positive(&self) -> bool {
        self.sum_floor.is_none_or(|f| f <= 0.0) && self.r_min.iter().all(|&r| r <= 0.0)
    }
}

impl InterferenceNetwork {
    pub fn rate_mm(&self, i: usize) -> Result<RateMm> {
        if i >= self.users() {
            return Err(Error::Precondition(format!("user index {i} out of range")));
        }
        Ok(RateMm {
            net: self.clone(),
            user: i,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// Throughput maximization with QoS floors.
    TpMax,
    /// GEE maximization with QoS floors.
    GeeMax,
    /// Transmit power minimization keeping `omega * r_star` of the throughput.
    PminHtee,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub r_min: Vec<f64>,
    pub omega: f64,
    pub r_star: Option<f64>,
    pub p_max: Vec<f64>,
}

impl ProblemSpec {
    pub fn tp_max(p_max: Vec<f64>) -> Self {
        Self {
            kind: ProblemKind::TpMax,
            r_min: vec![0.0; p_max.len()],
            omega: 1.0,
            r_star: None,
            p_max,
        }
    }

    pub fn gee_max(p_max: Vec<f64>) -> Self {
        Self {
            kind: ProblemKind::GeeMax,
            ..Self::tp_max(p_max)
        }
    }

    pub fn pmin_htee(p_max: Vec<f64>, omega: f64, r_star: f64) -> Self {
        Self {
            kind: ProblemKind::PminHtee,
            omega,
            r_star: Some(r_star),
            ..Self::tp_max(p_max)
        }
    }

    pub fn with_r_min(mut self, r_min: Vec<f64>) -> Self {
        self.r_min = r_min;
        self
    }

    pub fn validate(&self, users: usize) -> Result<()> {
        if self.p_max.len() != users || self.r_min.len() != users {
            return Err(Error::Config(format!(
                "problem vectors must have {users} entries (p_max: {}, r_min: {})",
                self.p_max.len(),
                self.r_min.len()
            )));
        }
        if self.p_max.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::Config("power budgets must be positive".into()));
        }
        if self.r_min.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(Error::Config("rate floors must be nonnegative".into()));
        }
        if !(0.0..=1.0).contains(&self.omega) {
            return Err(Error::Config(format!("worsening factor {} outside [0, 1]", self.omega)));
        }
        match (self.kind, self.r_star) {
            (ProblemKind::PminHtee, None) => Err(Error::Config(
                "power minimization needs the optimal throughput r_star; solve TP max first".into(),
            )),
            (ProblemKind::PminHtee, Some(r)) if !(r.is_finite() && r >= 0.0) => {
                Err(Error::Config(format!("invalid r_star {r}")))
            }
            (ProblemKind::TpMax | ProblemKind::GeeMax, Some(_)) => {
                Err(Error::Config("r_star only applies to power minimization".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone)]
pub enum Objective {
    SumRate(SumRateMm),
    Gee(GeeMm),
    SumPower(SumPower),
}

impl MixedMonotonic for Objective {
    fn arity(&self) -> usize {
        match self {
            Objective::SumRate(f) => f.arity(),
            Objective::Gee(f) => f.arity(),
            Objective::SumPower(f) => f.arity(),
        }
    }
    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Objective::SumRate(f) => f.eval(x, y),
            Objective::Gee(f) => f.eval(x, y),
            Objective::SumPower(f) => f.eval(x, y),
        }
    }
}

/// An MM-represented problem over the box `[0, P]`.
#[derive(Debug, Clone)]
pub struct Problem {
    pub kind: ProblemKind,
    pub sense: Sense,
    pub objective: Objective,
    pub constraint: RateConstraint,
    pub domain: Hyperrect,
}

pub fn build_problem(net: &InterferenceNetwork, power: &PowerModel, spec: &ProblemSpec) -> Result<Problem> {
    spec.validate(net.users())?;
    let domain = Hyperrect::from_origin(spec.p_max.clone())?;
    let (sense, objective, floor) = match spec.kind {
        ProblemKind::TpMax => (Sense::Maximize, Objective::SumRate(SumRateMm::new(net.clone())), None),
        ProblemKind::GeeMax => (
            Sense::Maximize,
            Objective::Gee(GeeMm::new(net.clone(), power.clone())?),
            None,
        ),
        ProblemKind::PminHtee => (
            Sense::Minimize,
            Objective::SumPower(SumPower { users: net.users() }),
            spec.r_star.map(|r| spec.omega * r),
        ),
    };
    Ok(Problem {
        kind: spec.kind,
        sense,
        objective,
        constraint: RateConstraint::new(net.clone(), floor, spec.r_min.clone())?,
        domain,
    })
}
