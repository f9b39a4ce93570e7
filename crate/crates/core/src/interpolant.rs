//! Piecewise polynomial interpolants: fixed-stencil Lagrange, ENO and ENO-SR.
//!
//! ENO-SR runs corner detection first. Every maximal `B` run of one or two
//! intervals is replaced by two one-sided polynomials built from the stencils
//! flanking the run, split at their intersection `ψ`. Runs where no unique
//! intersection exists, where a flanking stencil leaves the grid, or that are
//! longer than two intervals fall back to `G` and get an ENO polynomial.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::detection::{label_intervals, LabelSequence};
use crate::error::{Error, Result};
use crate::polynomial::{intersect_on_interval, NewtonPoly, Samples};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    FixedLagrange,
    Eno,
    EnoSr,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::FixedLagrange, Mode::Eno, Mode::EnoSr];

    pub fn name(self) -> &'static str {
        match self {
            Mode::FixedLagrange => "lagrange",
            Mode::Eno => "eno",
            Mode::EnoSr => "enosr",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lagrange" | "fixed" => Ok(Mode::FixedLagrange),
            "eno" => Ok(Mode::Eno),
            "enosr" | "eno-sr" => Ok(Mode::EnoSr),
            _ => Err(Error::InvalidMode(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub poly: NewtonPoly,
}

/// A subcell split of a `B` run.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub psi: f64,
    /// Intervals `I_i` covered by the run.
    pub run: Range<usize>,
    pub left_piece: usize,
    pub right_piece: usize,
    /// `|p⁺'(ψ) - p⁻'(ψ)|`, the estimated jump in the first derivative.
    pub slope_jump: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnosrInterpolant {
    mode: Mode,
    m: usize,
    pieces: Vec<Piece>,
    splits: Vec<Split>,
    labels: Option<LabelSequence>,
    fallbacks: Vec<Range<usize>>,
}

impl EnosrInterpolant {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    /// Labels produced by detection, before any fallback (ENO-SR only).
    pub fn labels(&self) -> Option<&LabelSequence> {
        self.labels.as_ref()
    }

    /// `B` runs that were relabeled `G` while building.
    pub fn fallbacks(&self) -> &[Range<usize>] {
        &self.fallbacks
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.pieces[0].lo, self.pieces[self.pieces.len() - 1].hi)
    }

    /// Piece containing `x`. At a shared boundary the left piece wins.
    pub fn piece_at(&self, x: f64) -> Result<&Piece> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&x) {
            return Err(Error::OutOfDomain { x, lo, hi });
        }
        let k = self.pieces.partition_point(|p| p.hi < x);
        Ok(&self.pieces[k.min(self.pieces.len() - 1)])
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.piece_at(x)?.poly.eval(x))
    }

    /// Location of the strongest detected corner: the split with the largest
    /// estimated derivative jump.
    pub fn locate_corner(&self) -> Result<Option<f64>> {
        if self.mode != Mode::EnoSr {
            return Err(Error::WrongMode);
        }
        Ok(self.splits.iter().max_by(|a, b| a.slope_jump.total_cmp(&b.slope_jump)).map(|s| s.psi))
    }
}

/// Hierarchical ENO stencil of `m` nodes containing `x_i` and `x_{i+1}`.
///
/// Grows from `{i, i+1}` toward the side whose grown stencil has the smaller
/// top divided difference; ties go left. At the ends of the grid the stencil
/// is forced to grow inward.
pub fn eno_stencil(s: &Samples, i: usize, m: usize) -> Result<Range<usize>> {
    if m < 2 {
        return Err(Error::InvalidOrder { m, min: 2 });
    }
    let n = s.len();
    if n < m || i + 1 >= n {
        return Err(Error::StencilOutOfRange { start: i, end: i + m, len: n });
    }
    let (mut lo, mut hi) = (i, i + 1);
    for _ in 2..m {
        let order = hi - lo + 1;
        if lo == 0 {
            hi += 1;
        } else if hi == n - 1 {
            lo -= 1;
        } else {
            let left = s.divided_difference(lo - 1, order)?.abs();
            let right = s.divided_difference(lo, order)?.abs();
            if left <= right {
                lo -= 1;
            } else {
                hi += 1;
            }
        }
    }
    Ok(lo..hi + 1)
}

/// Fixed stencil with `ceil(m/2)` nodes at or left of `x_i`, clamped to the grid.
pub fn fixed_stencil(n_nodes: usize, i: usize, m: usize) -> Range<usize> {
    let m1 = m.div_ceil(2);
    let start = (i + 1).saturating_sub(m1).min(n_nodes - m);
    start..start + m
}

pub fn build_interpolant(s: &Samples, m: usize, mode: Mode) -> Result<EnosrInterpolant> {
    if m < 2 {
        return Err(Error::InvalidOrder { m, min: 2 });
    }
    let needed = if mode == Mode::EnoSr { 2 * m + 2 } else { m };
    if s.len() < needed {
        return Err(Error::TooFewNodes { needed, got: s.len() });
    }

    let intervals = s.grid().intervals();
    let x = s.nodes();
    let g_piece = |i: usize| -> Result<Piece> {
        let stencil = match mode {
            Mode::FixedLagrange => fixed_stencil(s.len(), i, m),
            Mode::Eno | Mode::EnoSr => eno_stencil(s, i, m)?,
        };
        Ok(Piece { lo: x[i], hi: x[i + 1], poly: s.fit_newton(stencil)? })
    };

    if mode != Mode::EnoSr {
        let pieces = (0..intervals).map(g_piece).collect::<Result<Vec<_>>>()?;
        return Ok(EnosrInterpolant { mode, m, pieces, splits: Vec::new(), labels: None, fallbacks: Vec::new() });
    }

    let labels = label_intervals(s, m)?;
    let mut pieces = Vec::with_capacity(intervals + 2);
    let mut splits = Vec::new();
    let mut fallbacks = Vec::new();

    let mut runs = labels.b_runs().into_iter().peekable();
    let mut i = 0;
    while i < intervals {
        let run = match runs.peek() {
            Some(r) if r.start == i => runs.next().unwrap(),
            _ => {
                pieces.push(g_piece(i)?);
                i += 1;
                continue;
            }
        };
        match subcell_split(s, m, &run) {
            Some((left, right, psi, slope_jump)) => {
                let (lo, hi) = (x[run.start], x[run.end]);
                splits.push(Split {
                    psi,
                    run: run.clone(),
                    left_piece: pieces.len(),
                    right_piece: pieces.len() + 1,
                    slope_jump,
                });
                pieces.push(Piece { lo, hi: psi, poly: left });
                pieces.push(Piece { lo: psi, hi, poly: right });
            }
            None => {
                for k in run.clone() {
                    pieces.push(g_piece(k)?);
                }
                fallbacks.push(run.clone());
            }
        }
        i = run.end;
    }

    Ok(EnosrInterpolant { mode, m, pieces, splits, labels: Some(labels), fallbacks })
}

/// One-sided polynomials for a `B` run and their crossing, if the run admits one.
fn subcell_split(s: &Samples, m: usize, run: &Range<usize>) -> Option<(NewtonPoly, NewtonPoly, f64, f64)> {
    if run.len() > 2 {
        return None;
    }
    let (i, end) = (run.start, run.end);
    // Left stencil {x_{i-m+1}, ..., x_i}, right stencil {x_end, ..., x_{end+m-1}}.
    if i + 1 < m || end + m > s.len() {
        return None;
    }
    let left = s.fit_newton(i + 1 - m..i + 1).ok()?;
    let right = s.fit_newton(end..end + m).ok()?;
    let (a, b) = (s.nodes()[i], s.nodes()[end]);
    let psi = intersect_on_interval(&left, &right, (a, b))?;
    if !(a < psi && psi < b) {
        return None;
    }
    let slope_jump = (right.eval_with_derivative(psi).1 - left.eval_with_derivative(psi).1).abs();
    Some((left, right, psi, slope_jump))
}
