//! Test functions with a single corner, error metrics and dyadic
//! convergence studies.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::detection::critical_spacing;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::interpolant::{build_interpolant, EnosrInterpolant, Mode};
use crate::polynomial::Samples;

pub const DEFAULT_PROBES_PER_INTERVAL: usize = 64;

/// Default base grid: 21 intervals on [-1, 1], σ ≤ 1.4, seed 7.
pub const DEFAULT_N0: usize = 21;
pub const DEFAULT_SIGMA: f64 = 1.4;
pub const DEFAULT_SEED: u64 = 7;

pub fn default_base_grid() -> Grid {
    Grid::generate_quasi_uniform(DEFAULT_N0, (-1.0, 1.0), DEFAULT_SIGMA, DEFAULT_SEED)
        .expect("default grid parameters are valid")
}

/// A function continuous everywhere with a jump `[f'] = f'(μ⁺) - f'(μ⁻)`
/// in its first derivative at `mu`.
#[derive(Clone)]
pub struct CornerFunction {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub mu: f64,
    pub jump: f64,
    /// Caller-supplied bound on `|f''|` away from `mu`.
    pub sup_f2: f64,
    /// Highest derivative order that stays bounded away from `mu`.
    pub smoothness: usize,
}

impl fmt::Debug for CornerFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CornerFunction")
            .field("mu", &self.mu)
            .field("jump", &self.jump)
            .field("sup_f2", &self.sup_f2)
            .field("smoothness", &self.smoothness)
            .finish_non_exhaustive()
    }
}

impl CornerFunction {
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        mu: f64,
        jump: f64,
        sup_f2: f64,
        smoothness: usize,
    ) -> Self {
        CornerFunction { f: Arc::new(f), mu, jump, sup_f2, smoothness }
    }

    /// Wraps a smooth function; `mu` is NaN and the jump is zero.
    pub fn smooth(f: impl Fn(f64) -> f64 + Send + Sync + 'static, sup_f2: f64) -> Self {
        CornerFunction::new(f, f64::NAN, 0.0, sup_f2, usize::MAX)
    }

    /// `|x - mu|`.
    pub fn abs(mu: f64) -> Self {
        CornerFunction::new(move |x| (x - mu).abs(), mu, 2.0, 0.0, usize::MAX)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn sample(&self, grid: Grid) -> Result<Samples> {
        Samples::from_fn(grid, |x| self.eval(x))
    }

    /// `|[f']| / (4 sup |f''|)`, or `None` when `sup_f2` is zero.
    pub fn critical_spacing(&self) -> Option<f64> {
        critical_spacing(self.jump, self.sup_f2).ok()
    }
}

/// The family with a corner at `π/8`:
/// `(x - π/8)² + d (x - π/8) + cos(πx/2)` left of the corner and
/// `cos(πx/2)` right of it. `[f'] = -d`; `sup_f2` is reported as 2 so that
/// `h_c = d/8`.
pub fn f_d(d: f64) -> CornerFunction {
    let mu = PI / 8.0;
    let f = move |x: f64| {
        let c = (0.5 * PI * x).cos();
        if x <= mu {
            let t = x - mu;
            t * t + d * t + c
        } else {
            c
        }
    };
    CornerFunction::new(f, mu, -d, 2.0, usize::MAX)
}

/// The two functions that agree at every node but differ by `h²/4` on
/// `[x_j, x_{j+1}]`: `(f₊, f₋)`.
pub fn plus_minus_pair(grid: &Grid, j: usize) -> (CornerFunction, CornerFunction) {
    let (a, b) = (grid.nodes()[j], grid.nodes()[j + 1]);
    let bump = move |x: f64| (x - a) * (x - b);
    let plus = CornerFunction::new(move |x| if x > a { bump(x) } else { 0.0 }, a, a - b, 2.0, usize::MAX);
    let minus = CornerFunction::new(move |x| if x > b { bump(x) } else { 0.0 }, b, b - a, 2.0, usize::MAX);
    (plus, minus)
}

/// Largest `|f - I f|` over `probes_per_interval` equispaced points on each
/// piece, endpoints included. Each piece is evaluated with its own polynomial,
/// so both sides of a split are measured.
pub fn sup_error(f: &CornerFunction, interp: &EnosrInterpolant, probes_per_interval: usize) -> f64 {
    let n = probes_per_interval.max(2);
    interp
        .pieces()
        .iter()
        .flat_map(|piece| {
            (0..n).map(move |k| {
                let x =
                    if k == n - 1 { piece.hi } else { piece.lo + (piece.hi - piece.lo) * (k as f64 / (n - 1) as f64) };
                (f.eval(x) - piece.poly.eval(x)).abs()
            })
        })
        .fold(0.0, f64::max)
}

/// `p_k = log2(e_{k-1} / e_k)` for `k >= 1`.
pub fn order_sequence(errors: &[f64]) -> Result<Vec<f64>> {
    if let Some((index, &value)) = errors.iter().enumerate().find(|(_, &e)| !(e > 0.0)) {
        return Err(Error::NonpositiveError { index, value });
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

fn pair_order(prev: Option<f64>, cur: Option<f64>) -> Option<f64> {
    match (prev, cur) {
        (Some(a), Some(b)) if a > 0.0 && b > 0.0 => Some((a / b).log2()),
        _ => None,
    }
}

/// Negated least-squares slope of `log2(errors[k])` against `k`.
pub fn fitted_order(errors: &[f64]) -> Option<f64> {
    if errors.len() < 2 || errors.iter().any(|&e| !(e > 0.0)) {
        return None;
    }
    let n = errors.len() as f64;
    let ys: Vec<f64> = errors.iter().map(|e| e.log2()).collect();
    let x_mean = (n - 1.0) / 2.0;
    let y_mean = ys.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (k, y) in ys.iter().enumerate() {
        let dx = k as f64 - x_mean;
        num += dx * (y - y_mean);
        den += dx * dx;
    }
    Some(-num / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub level: usize,
    pub h_max: f64,
    /// Detected corner, absent when no split was made.
    pub psi: Option<f64>,
    /// `|μ - ψ|`.
    pub detection_error: Option<f64>,
    pub detection_order: Option<f64>,
    pub interpolation_error: f64,
    pub interpolation_order: Option<f64>,
}

/// Refines `base_grid` dyadically `levels - 1` times and measures detection
/// and interpolation errors at every level. Levels run in parallel; rows come
/// back in level order.
pub fn convergence_study(
    f: &CornerFunction,
    base_grid: &Grid,
    levels: usize,
    m: usize,
    mode: Mode,
) -> Result<Vec<ConvergenceRow>> {
    let mut grids = Vec::with_capacity(levels);
    let mut g = base_grid.clone();
    for _ in 0..levels {
        let next = g.refine_dyadic();
        grids.push(g);
        g = next;
    }

    let mut rows = grids
        .into_par_iter()
        .enumerate()
        .map(|(level, grid)| {
            let h_max = grid.h_max();
            let interp = build_interpolant(&f.sample(grid)?, m, mode)?;
            let psi = match mode {
                Mode::EnoSr => interp.locate_corner()?,
                _ => None,
            };
            Ok(ConvergenceRow {
                level,
                h_max,
                psi,
                detection_error: psi.map(|p| (f.mu - p).abs()),
                detection_order: None,
                interpolation_error: sup_error(f, &interp, DEFAULT_PROBES_PER_INTERVAL),
                interpolation_order: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    for k in 1..rows.len() {
        rows[k].detection_order = pair_order(rows[k - 1].detection_error, rows[k].detection_error);
        rows[k].interpolation_order =
            pair_order(Some(rows[k - 1].interpolation_error), Some(rows[k].interpolation_error));
    }
    Ok(rows)
}
