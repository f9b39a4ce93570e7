//! Strictly increasing node sequences and their spacing statistics.
//!
//! A grid is σ quasi-uniform when `h_max / h_min <= σ`. The statistics are
//! always recomputed from the nodes; nothing is cached alongside them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
}

impl Grid {
    /// Validates and wraps a node sequence.
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::TooFewNodes { needed: 2, got: nodes.len() });
        }
        if let Some((index, &value)) = nodes.iter().enumerate().find(|(_, x)| !x.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        if let Some(index) = nodes.windows(2).position(|w| w[1] - w[0] <= 0.0) {
            return Err(Error::NonMonotonicNodes { index, prev: nodes[index], next: nodes[index + 1] });
        }
        Ok(Grid { nodes })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of intervals `N`; nodes are `x_0..=x_N`.
    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn lo(&self) -> f64 {
        self.nodes[0]
    }

    pub fn hi(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Spacings `h_1..h_N`, stored zero-based: `spacings()[k] = x_{k+1} - x_k`.
    pub fn spacings(&self) -> impl Iterator<Item = f64> + '_ {
        self.nodes.windows(2).map(|w| w[1] - w[0])
    }

    /// Spacing `h_i = x_i - x_{i-1}` in one-based indexing, `1 <= i <= N`.
    pub fn h(&self, i: usize) -> f64 {
        self.nodes[i] - self.nodes[i - 1]
    }

    pub fn h_min(&self) -> f64 {
        self.spacings().fold(f64::INFINITY, f64::min)
    }

    pub fn h_max(&self) -> f64 {
        self.spacings().fold(0.0, f64::max)
    }

    pub fn sigma(&self) -> f64 {
        self.h_max() / self.h_min()
    }

    /// Index `i` of the interval `[x_i, x_{i+1}]` containing `x`. Interior
    /// nodes belong to the interval on their left.
    pub fn locate(&self, x: f64) -> Option<usize> {
        if !(self.lo()..=self.hi()).contains(&x) {
            return None;
        }
        let i = self.nodes.partition_point(|&node| node < x);
        Some(i.saturating_sub(1).min(self.intervals() - 1))
    }

    /// Inserts the midpoint of every interval: `x'_{2j} = x_j`,
    /// `x'_{2j+1} = (x_j + x_{j+1}) / 2`.
    pub fn refine_dyadic(&self) -> Grid {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(self.hi());
        Grid { nodes }
    }

    /// True iff every window of `n` consecutive spacings has a max/min ratio
    /// of at most `sigma`. Windows longer than the grid cover the whole grid.
    pub fn is_n_local_sigma(&self, n: usize, sigma: f64) -> bool {
        let h: Vec<f64> = self.spacings().collect();
        let n = n.clamp(1, h.len());
        h.windows(n).all(|w| {
            let max = w.iter().copied().fold(0.0, f64::max);
            let min = w.iter().copied().fold(f64::INFINITY, f64::min);
            max / min <= sigma
        })
    }

    /// Reproducible σ quasi-uniform grid on `[a, b]`.
    ///
    /// Spacing factors are drawn uniformly from `[1, sigma_target]` by a
    /// ChaCha8 stream seeded with `seed`, then rescaled to sum to `b - a`.
    /// Endpoints are exactly `a` and `b`.
    pub fn generate_quasi_uniform(
        n_intervals: usize,
        domain: (f64, f64),
        sigma_target: f64,
        seed: u64,
    ) -> Result<Grid> {
        let (a, b) = domain;
        if !(sigma_target.is_finite() && sigma_target >= 1.0) {
            return Err(Error::InvalidSigma(sigma_target));
        }
        if n_intervals == 0 {
            return Err(Error::TooFewNodes { needed: 2, got: 1 });
        }
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidDomain(a, b));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let factors: Vec<f64> = (0..n_intervals)
            .map(|_| if sigma_target > 1.0 { rng.gen_range(1.0..=sigma_target) } else { 1.0 })
            .collect();
        let total: f64 = factors.iter().sum();

        let mut nodes = Vec::with_capacity(n_intervals + 1);
        nodes.push(a);
        let mut acc = 0.0;
        for f in &factors[..n_intervals - 1] {
            acc += f;
            nodes.push(a + (b - a) * (acc / total));
        }
        nodes.push(b);
        Grid::new(nodes)
    }
}

impl TryFrom<Vec<f64>> for Grid {
    type Error = Error;

    fn try_from(nodes: Vec<f64>) -> Result<Self> {
        Grid::new(nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_statistics() {
        let g = Grid::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(g.h_min(), 1.0);
        assert_eq!(g.h_max(), 1.0);
        assert_eq!(g.sigma(), 1.0);
        assert_eq!(g.intervals(), 3);
    }

    #[test]
    fn nonuniform_statistics() {
        let g = Grid::new(vec![0.0, 0.1, 0.3]).unwrap();
        assert!((g.h_min() - 0.1).abs() < 1e-15);
        assert!((g.h_max() - 0.2).abs() < 1e-15);
        assert!((g.sigma() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_nodes() {
        assert!(matches!(Grid::new(vec![0.0, 0.0, 1.0]), Err(Error::NonMonotonicNodes { index: 0, .. })));
        assert!(matches!(Grid::new(vec![0.0, 2.0, 1.0]), Err(Error::NonMonotonicNodes { index: 1, .. })));
        assert!(matches!(Grid::new(vec![1.0]), Err(Error::TooFewNodes { .. })));
        assert!(matches!(Grid::new(vec![0.0, f64::NAN]), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn refine_inserts_midpoints() {
        let g = Grid::new(vec![0.0, 1.0]).unwrap().refine_dyadic();
        assert_eq!(g.nodes(), &[0.0, 0.5, 1.0]);
        let g = Grid::new(vec![0.0, 0.1, 0.3]).unwrap().refine_dyadic();
        let want = [0.0, 0.05, 0.1, 0.2, 0.3];
        for (x, w) in g.nodes().iter().zip(want) {
            assert!((x - w).abs() < 1e-16);
        }
    }

    #[test]
    fn generator_single_interval() {
        for seed in 0..5 {
            let g = Grid::generate_quasi_uniform(1, (0.0, 1.0), 1.7, seed).unwrap();
            assert_eq!(g.nodes(), &[0.0, 1.0]);
        }
    }

    #[test]
    fn generator_sigma_one_is_uniform() {
        let g = Grid::generate_quasi_uniform(10, (-1.0, 1.0), 1.0, 3).unwrap();
        assert_eq!(g.len(), 11);
        for h in g.spacings() {
            assert!((h - 0.2).abs() < 1e-14);
        }
    }

    #[test]
    fn generator_properties() {
        let g = Grid::generate_quasi_uniform(21, (-1.0, 1.0), 2.0, 7).unwrap();
        assert_eq!(g.len(), 22);
        assert_eq!(g.lo(), -1.0);
        assert_eq!(g.hi(), 1.0);
        assert!(g.sigma() <= 2.0 * (1.0 + 1e-12));
        assert_eq!(g, Grid::generate_quasi_uniform(21, (-1.0, 1.0), 2.0, 7).unwrap());
        assert_ne!(g, Grid::generate_quasi_uniform(21, (-1.0, 1.0), 2.0, 8).unwrap());
    }

    #[test]
    fn generator_rejects_sigma_below_one() {
        assert!(matches!(Grid::generate_quasi_uniform(5, (0.0, 1.0), 0.9, 0), Err(Error::InvalidSigma(_))));
        assert!(matches!(Grid::generate_quasi_uniform(5, (1.0, 0.0), 1.5, 0), Err(Error::InvalidDomain(..))));
    }

    #[test]
    fn n_local_sigma() {
        let uniform = Grid::new((0..8).map(f64::from).collect()).unwrap();
        assert!(uniform.is_n_local_sigma(3, 1.0));
        let g = Grid::new(vec![0.0, 1.0, 1.1, 2.1]).unwrap();
        assert!(!g.is_n_local_sigma(2, 1.5));
        assert!(g.is_n_local_sigma(1, 1.0));
    }

    #[test]
    fn locate_intervals() {
        let g = Grid::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(g.locate(0.0), Some(0));
        assert_eq!(g.locate(0.5), Some(0));
        assert_eq!(g.locate(1.0), Some(0));
        assert_eq!(g.locate(1.5), Some(1));
        assert_eq!(g.locate(3.0), Some(2));
        assert_eq!(g.locate(3.5), None);
    }
}
