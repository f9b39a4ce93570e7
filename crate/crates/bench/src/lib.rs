//! Fixtures shared by the benchmarks.

use enosr::harness::default_base_grid;
use enosr::{f_d, Grid, Samples};

/// The default base grid refined `levels` times.
pub fn refined_grid(levels: usize) -> Grid {
    (0..levels).fold(default_base_grid(), |g, _| g.refine_dyadic())
}

/// `f_d(1)` sampled on [`refined_grid`].
pub fn corner_samples(levels: usize) -> Samples {
    f_d(1.0).sample(refined_grid(levels)).expect("refined grids are valid")
}
