//! Newton-form interpolation on arbitrary stencils.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Probe points used to count sign changes of `p_right - p_left`.
pub const INTERSECTION_PROBES: usize = 64;

/// Values below `ZERO_TOLERANCE * scale` count as zero when counting sign changes.
pub const ZERO_TOLERANCE: f64 = 1e-13;

/// Point values `f_i` attached to the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    grid: Grid,
    values: Vec<f64>,
}

impl Samples {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { nodes: grid.len(), values: values.len() });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Samples { grid, values })
    }

    /// Samples `f` at every node of `grid`.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Samples::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same grid, values multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Samples> {
        Samples::new(self.grid.clone(), self.values.iter().map(|v| v * factor).collect())
    }

    fn check_range(&self, range: &Range<usize>) -> Result<()> {
        if range.start >= range.end || range.end > self.len() {
            return Err(Error::StencilOutOfRange { start: range.start, end: range.end, len: self.len() });
        }
        Ok(())
    }

    /// `f[x_start, ..., x_{start+order}]` by the standard recursion.
    pub fn divided_difference(&self, start: usize, order: usize) -> Result<f64> {
        let range = start..start + order + 1;
        self.check_range(&range)?;
        Ok(top_divided_difference(&self.nodes()[range.clone()], &self.values[range]))
    }

    /// Interpolating polynomial through the nodes in `stencil`.
    pub fn fit_newton(&self, stencil: Range<usize>) -> Result<NewtonPoly> {
        self.check_range(&stencil)?;
        Ok(NewtonPoly::fit(&self.nodes()[stencil.clone()], &self.values[stencil]))
    }
}

/// Highest-order divided difference over all given nodes.
fn top_divided_difference(xs: &[f64], fs: &[f64]) -> f64 {
    let mut table = fs.to_vec();
    let n = xs.len();
    for level in 1..n {
        for k in 0..n - level {
            table[k] = (table[k + 1] - table[k]) / (xs[k + level] - xs[k]);
        }
    }
    table[0]
}

/// `p(x) = c_0 + (x - x_0)(c_1 + (x - x_1)(c_2 + ...))`.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPoly {
    nodes: Vec<f64>,
    coeffs: Vec<f64>,
}

impl NewtonPoly {
    /// Fits the polynomial of degree `< xs.len()` through `(xs[k], fs[k])`.
    /// Nodes need not be sorted but must be pairwise distinct.
    ///
    /// # Panics
    ///
    /// If `xs` is empty or `xs.len() != fs.len()`.
    pub fn fit(xs: &[f64], fs: &[f64]) -> NewtonPoly {
        assert!(!xs.is_empty() && xs.len() == fs.len());
        let n = xs.len();
        let mut coeffs = fs.to_vec();
        // In-place tableau: after step `level`, coeffs[k] = f[x_{k-level}, ..., x_k].
        for level in 1..n {
            for k in (level..n).rev() {
                coeffs[k] = (coeffs[k] - coeffs[k - 1]) / (xs[k] - xs[k - level]);
            }
        }
        NewtonPoly { nodes: xs.to_vec(), coeffs }
    }

    pub fn constant(c: f64) -> NewtonPoly {
        NewtonPoly { nodes: vec![0.0], coeffs: vec![c] }
    }

    pub fn stencil_nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.coeffs.len();
        let mut acc = self.coeffs[n - 1];
        for k in (0..n - 1).rev() {
            acc = acc * (x - self.nodes[k]) + self.coeffs[k];
        }
        acc
    }

    /// Value and first derivative at `x`.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let n = self.coeffs.len();
        let mut p = self.coeffs[n - 1];
        let mut dp = 0.0;
        for k in (0..n - 1).rev() {
            dp = dp * (x - self.nodes[k]) + p;
            p = p * (x - self.nodes[k]) + self.coeffs[k];
        }
        (p, dp)
    }
}

/// Locates the unique crossing of `p_left` and `p_right` inside `[a, b]`.
///
/// `q = p_right - p_left` is sampled at [`INTERSECTION_PROBES`] equispaced
/// points. Probes with `|q| <= ZERO_TOLERANCE * scale`, where `scale` is the
/// largest magnitude of `q`, `p_left` or `p_right` seen on the probe, carry no
/// sign. Exactly one sign change among the remaining probes yields a root
/// polished by bisection to width `2^-48 (b - a)`; anything else is `None`.
pub fn intersect_on_interval(p_left: &NewtonPoly, p_right: &NewtonPoly, interval: (f64, f64)) -> Option<f64> {
    let (a, b) = interval;
    if !(a < b) {
        return None;
    }
    let q = |x: f64| p_right.eval(x) - p_left.eval(x);

    let last = (INTERSECTION_PROBES - 1) as f64;
    let probe_x = |k: usize| if k == INTERSECTION_PROBES - 1 { b } else { a + (b - a) * (k as f64 / last) };

    let mut scale = f64::MIN_POSITIVE;
    let mut samples = Vec::with_capacity(INTERSECTION_PROBES);
    for k in 0..INTERSECTION_PROBES {
        let x = probe_x(k);
        let (l, r) = (p_left.eval(x), p_right.eval(x));
        let qx = r - l;
        scale = scale.max(qx.abs()).max(l.abs()).max(r.abs());
        samples.push((x, qx));
    }
    let zero = ZERO_TOLERANCE * scale;

    let mut signed = samples.iter().filter(|(_, qx)| qx.abs() > zero);
    let mut prev = *signed.next()?;
    let mut bracket = None;
    for &(x, qx) in signed {
        if qx.signum() != prev.1.signum() {
            if bracket.is_some() {
                return None;
            }
            bracket = Some((prev, (x, qx)));
        }
        prev = (x, qx);
    }
    let ((mut lo, q_lo), (mut hi, _)) = bracket?;

    let tol = (b - a) * 2f64.powi(-48);
    let lo_sign = q_lo.signum();
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let qm = q(mid);
        if qm == 0.0 {
            return Some(mid);
        }
        if qm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
