//! Corner detection from second divided differences.
//!
//! Interval `I_i = [x_i, x_{i+1}]` is labeled `B` when the magnitudes of the
//! second differences around it single it out as a strict local maximum:
//!
//! 1. `|D_k| > |D_{k±n}|` for `n = 1..=m` labels `I_k` and `I_{k+1}`.
//! 2. `|D_i| > |D_{i+n}|` and `|D_{i-1}| > |D_{i-1-n}|` for `n = 1..m` labels `I_i`.
//!
//! A rule whose references fall outside the grid does not fire.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::polynomial::Samples;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    G,
    B,
}

impl Label {
    pub fn as_char(self) -> char {
        match self {
            Label::G => 'G',
            Label::B => 'B',
        }
    }
}

/// One label per interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSequence {
    labels: Vec<Label>,
}

impl LabelSequence {
    pub fn new(labels: Vec<Label>) -> Self {
        LabelSequence { labels }
    }

    pub fn all_good(n: usize) -> Self {
        LabelSequence { labels: vec![Label::G; n] }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Label> {
        self.labels.get(i).copied()
    }

    pub fn set(&mut self, i: usize, label: Label) {
        self.labels[i] = label;
    }

    /// Maximal runs of consecutive `B` intervals.
    pub fn b_runs(&self) -> Vec<Range<usize>> {
        let mut runs = Vec::new();
        let mut start = None;
        for (i, &l) in self.labels.iter().enumerate() {
            match (l, start) {
                (Label::B, None) => start = Some(i),
                (Label::G, Some(s)) => {
                    runs.push(s..i);
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push(s..self.labels.len());
        }
        runs
    }

    pub fn all_g(&self) -> bool {
        self.labels.iter().all(|&l| l == Label::G)
    }
}

impl fmt::Display for LabelSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.labels.iter().try_for_each(|l| write!(f, "{}", l.as_char()))
    }
}

impl std::str::FromStr for LabelSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                'G' => Ok(Label::G),
                'B' => Ok(Label::B),
                _ => Err(Error::IndexOutOfRange { index: i, reason: "label must be G or B" }),
            })
            .collect::<Result<Vec<_>>>()
            .map(LabelSequence::new)
    }
}

/// `d[i] = f[x_i, x_{i+1}, x_{i+2}]` for `i = 0..N-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondDifferences {
    d: Vec<f64>,
}

impl SecondDifferences {
    pub fn values(&self) -> &[f64] {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    fn abs(&self, i: isize) -> Option<f64> {
        usize::try_from(i).ok().and_then(|i| self.d.get(i)).map(|v| v.abs())
    }
}

/// Closed-form second differences on a nonuniform grid.
pub fn second_differences(s: &Samples) -> Result<SecondDifferences> {
    if s.len() < 3 {
        return Err(Error::TooFewNodes { needed: 3, got: s.len() });
    }
    let x = s.nodes();
    let f = s.values();
    let d = (0..s.len() - 2)
        .map(|i| {
            let h1 = x[i + 1] - x[i];
            let h2 = x[i + 2] - x[i + 1];
            f[i] / (h1 * (h1 + h2)) - f[i + 1] / (h1 * h2) + f[i + 2] / (h2 * (h1 + h2))
        })
        .collect();
    Ok(SecondDifferences { d })
}

/// Applies both labeling rules with order `m`.
pub fn label_intervals(s: &Samples, m: usize) -> Result<LabelSequence> {
    if m < 2 {
        return Err(Error::InvalidOrder { m, min: 2 });
    }
    let d = second_differences(s)?;
    Ok(label_from_differences(&d, s.grid().intervals(), m))
}

pub(crate) fn label_from_differences(d: &SecondDifferences, intervals: usize, m: usize) -> LabelSequence {
    let mut labels = LabelSequence::all_good(intervals);
    let m = m as isize;
    let n_d = d.len() as isize;

    // Returns None when any reference is missing, so the rule cannot fire.
    let dominates = |center: isize, offsets: &mut dyn Iterator<Item = isize>| -> Option<bool> {
        let c = d.abs(center)?;
        let mut all = true;
        for off in offsets {
            let other = d.abs(center + off)?;
            all &= c > other;
        }
        Some(all)
    };

    for k in 0..n_d {
        let mut offsets = (1..=m).flat_map(|n| [-n, n]);
        if dominates(k, &mut offsets) == Some(true) {
            labels.set(k as usize, Label::B);
            labels.set(k as usize + 1, Label::B);
        }
    }

    for i in 1..intervals as isize {
        let right = dominates(i, &mut (1..m));
        let left = dominates(i - 1, &mut (1..m).map(|n| -n));
        if right == Some(true) && left == Some(true) {
            labels.set(i as usize, Label::B);
        }
    }
    labels
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunViolation {
    /// A `B` run longer than two intervals.
    RunTooLong { start: usize, len: usize },
    /// Fewer than `m - 1` `G` intervals between two `B` runs.
    GapTooShort { start: usize, len: usize },
}

impl fmt::Display for RunViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunViolation::RunTooLong { start, len } => {
                write!(f, "B run of length {len} at interval {start}")
            }
            RunViolation::GapTooShort { start, len } => {
                write!(f, "G gap of length {len} at interval {start}")
            }
        }
    }
}

/// Checks B-run lengths and the G gaps between runs; empty means consistent.
pub fn validate_b_runs(labels: &LabelSequence, m: usize) -> Vec<RunViolation> {
    let runs = labels.b_runs();
    let mut report = Vec::new();
    for run in &runs {
        if run.len() > 2 {
            report.push(RunViolation::RunTooLong { start: run.start, len: run.len() });
        }
    }
    for pair in runs.windows(2) {
        let gap = pair[1].start - pair[0].end;
        if gap + 1 < m {
            report.push(RunViolation::GapTooShort { start: pair[0].end, len: gap });
        }
    }
    report
}

/// `h_c = |[f']| / (4 sup |f''|)`.
pub fn critical_spacing(jump_f1: f64, sup_f2: f64) -> Result<f64> {
    if !(sup_f2 > 0.0) {
        return Err(Error::NonpositiveSup(sup_f2));
    }
    Ok(jump_f1.abs() / (4.0 * sup_f2))
}

/// Whether a corner at `mu` inside `I_j` sits close enough to an end of the
/// interval that the neighboring interval is also guaranteed a `B` label.
pub fn adjacency_condition(g: &Grid, j: usize, mu: f64) -> Result<bool> {
    if j == 0 {
        return Err(Error::IndexOutOfRange { index: j, reason: "needs a spacing to the left" });
    }
    if j + 2 > g.intervals() {
        return Err(Error::IndexOutOfRange { index: j, reason: "needs a spacing to the right" });
    }
    let x = g.nodes();
    if !(x[j]..=x[j + 1]).contains(&mu) {
        return Err(Error::OutOfDomain { x: mu, lo: x[j], hi: x[j + 1] });
    }
    let (h0, h1, h2) = (g.h(j), g.h(j + 1), g.h(j + 2));
    let right = (x[j + 1] - mu) / (h0 + h1);
    let left = (mu - x[j]) / (h1 + h2);
    Ok(right - left > 0.25 || left - right > 0.25)
}
