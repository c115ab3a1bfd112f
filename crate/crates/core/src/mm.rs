//! Boxes, bisection and bounds for mixed-monotonic (MM) functions.
//!
//! An MM function `F(x, y)` is nondecreasing in `x` and nonincreasing in `y`.
//! Its diagonal `F(x, x)` is the function actually being optimized, and over a
//! box `[r, s]` the corner evaluations `F(s, r)` and `F(r, s)` bracket every
//! diagonal value inside the box.

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Closed axis-aligned box `[lower, upper]` in power space.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperrect {
    // lower corner followed by upper corner; inline up to four dimensions
    data: SmallVec<[f64; 8]>,
}

impl Hyperrect {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::InvalidBox("zero-dimensional box".into()));
        }
        for (i, (&l, &u)) in lower.iter().zip(&upper).enumerate() {
            if !l.is_finite() || !u.is_finite() {
                return Err(Error::InvalidBox(format!("non-finite bound in dimension {i}")));
            }
            if l < 0.0 {
                return Err(Error::InvalidBox(format!("negative lower bound {l} in dimension {i}")));
            }
            if l > u {
                return Err(Error::InvalidBox(format!("lower {l} > upper {u} in dimension {i}")));
            }
        }
        Ok(Self::from_parts_unchecked(&lower, &upper))
    }

    /// `[0, upper]`.
    pub fn from_origin(upper: Vec<f64>) -> Result<Self> {
        Self::new(vec![0.0; upper.len()], upper)
    }

    /// Internal constructor for boxes derived from a valid parent.
    pub(crate) fn from_parts_unchecked(lower: &[f64], upper: &[f64]) -> Self {
        debug_assert_eq!(lower.len(), upper.len());
        debug_assert!(lower.iter().zip(upper).all(|(l, u)| l <= u));
        let mut data = SmallVec::with_capacity(2 * lower.len());
        data.extend_from_slice(lower);
        data.extend_from_slice(upper);
        Self { data }
    }

    pub(crate) fn upper_mut(&mut self) -> &mut [f64] {
        let n = self.dim();
        &mut self.data[n..]
    }

    pub fn dim(&self) -> usize {
        self.data.len() / 2
    }

    pub fn lower(&self) -> &[f64] {
        &self.data[..self.dim()]
    }

    pub fn upper(&self) -> &[f64] {
        &self.data[self.dim()..]
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.lower().to_vec(), self.upper().to_vec())
    }

    /// Index and length of the longest edge; lowest index wins ties.
    pub fn longest_edge(&self) -> (usize, f64) {
        let (lower, upper) = (self.lower(), self.upper());
        let mut best = (0, upper[0] - lower[0]);
        for j in 1..lower.len() {
            let w = upper[j] - lower[j];
            if w > best.1 {
                best = (j, w);
            }
        }
        best
    }

    pub fn is_point(&self) -> bool {
        self.lower() == self.upper()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower().iter().zip(self.upper()))
                .all(|(v, (l, u))| l <= v && v <= u)
    }

    pub fn contains_box(&self, other: &Hyperrect) -> bool {
        self.contains(other.lower()) && self.contains(other.upper())
    }
}

/// Split a box at the midpoint of its longest edge.
///
/// Returns `(M-, M+)`: the lower half keeps the original lower corner and the
/// upper half keeps the original upper corner. The halves share the split facet.
pub fn bisect(b: &Hyperrect) -> Result<(Hyperrect, Hyperrect)> {
    let (j, width) = b.longest_edge();
    if width <= 0.0 {
        return Err(Error::DegenerateBox);
    }
    let n = b.dim();
    let mid = 0.5 * (b.data[j] + b.data[n + j]);

    let mut lo = b.clone();
    lo.data[n + j] = mid;
    let mut hi = b.clone();
    hi.data[j] = mid;
    Ok((lo, hi))
}

/// A function of two vector arguments, nondecreasing in the first and
/// nonincreasing in the second.
pub trait MixedMonotonic {
    fn arity(&self) -> usize;

    fn eval(&self, x: &[f64], y: &[f64]) -> f64;

    /// The represented function `F(x, x)`.
    fn diagonal(&self, x: &[f64]) -> f64 {
        self.eval(x, x)
    }

    /// `true` only if `F(x, y) <= 0` for every argument pair. Solvers use it
    /// to skip evaluating constraints that can never bind.
    fn never_positive(&self) -> bool {
        false
    }
}

impl<T: MixedMonotonic + ?Sized> MixedMonotonic for &T {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        (**self).eval(x, y)
    }
    fn diagonal(&self, x: &[f64]) -> f64 {
        (**self).diagonal(x)
    }
    fn never_positive(&self) -> bool {
        (**self).never_positive()
    }
}

impl<T: MixedMonotonic + ?Sized> MixedMonotonic for Box<T> {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        (**self).eval(x, y)
    }
    fn diagonal(&self, x: &[f64]) -> f64 {
        (**self).diagonal(x)
    }
    fn never_positive(&self) -> bool {
        (**self).never_positive()
    }
}

/// Closure-backed MM function. The caller is responsible for the monotonicity
/// contract.
pub struct FnPair<F> {
    arity: usize,
    f: F,
}

impl<F> FnPair<F>
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    pub fn new(arity: usize, f: F) -> Self {
        Self { arity, f }
    }
}

impl<F> MixedMonotonic for FnPair<F>
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    fn arity(&self) -> usize {
        self.arity
    }
    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        (self.f)(x, y)
    }
}

/// `H(x, y) = -F(y, x)`: turns a minimization objective into an MM
/// maximization objective with diagonal `-F(x, x)`.
pub struct Negated<F>(pub F);

impl<F: MixedMonotonic> MixedMonotonic for Negated<F> {
    fn arity(&self) -> usize {
        self.0.arity()
    }
    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        -self.0.eval(y, x)
    }
}

fn check_arity<F: MixedMonotonic + ?Sized>(f: &F, b: &Hyperrect) -> Result<()> {
    if f.arity() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.arity(),
            got: b.dim(),
        });
    }
    Ok(())
}

/// `G(lower, upper)`: a lower bound on `G(x, x)` over the box.
pub fn lower_bound_min<G: MixedMonotonic + ?Sized>(g: &G, b: &Hyperrect) -> Result<f64> {
    check_arity(g, b)?;
    finite(g.eval(b.lower(), b.upper()), "lower bound evaluation")
}

/// `F(upper, lower)`: an upper bound on `F(x, x)` over the box.
pub fn upper_bound_max<F: MixedMonotonic + ?Sized>(f: &F, b: &Hyperrect) -> Result<f64> {
    check_arity(f, b)?;
    finite(f.eval(b.upper(), b.lower()), "upper bound evaluation")
}

pub(crate) fn finite(v: f64, context: &'static str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NumericalDomain { context })
    }
}
