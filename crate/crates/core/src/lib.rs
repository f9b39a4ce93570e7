//! Nonlinear ENO and ENO-SR interpolation of point values on σ quasi-uniform
//! grids, with second-difference corner detection and a convergence harness.
//!
//! ```
//! use enosr::{build_interpolant, Grid, Mode, Samples};
//!
//! let grid = Grid::generate_quasi_uniform(30, (0.0, 1.0), 1.3, 1)?;
//! let samples = Samples::from_fn(grid, |x| (x - 0.41f64).abs())?;
//! let interp = build_interpolant(&samples, 4, Mode::EnoSr)?;
//! let psi = interp.locate_corner()?.unwrap();
//! assert!((psi - 0.41).abs() < 1e-9);
//! # Ok::<(), enosr::Error>(())
//! ```

pub mod csvio;
pub mod detection;
pub mod error;
pub mod grid;
pub mod harness;
pub mod interpolant;
pub mod polynomial;

pub use detection::{
    adjacency_condition, critical_spacing, label_intervals, second_differences, validate_b_runs, Label, LabelSequence,
    RunViolation, SecondDifferences,
};
pub use error::{Error, Result};
pub use grid::Grid;
pub use harness::{convergence_study, f_d, fitted_order, order_sequence, sup_error, ConvergenceRow, CornerFunction};
pub use interpolant::{build_interpolant, eno_stencil, fixed_stencil, EnosrInterpolant, Mode, Piece, Split};
pub use polynomial::{intersect_on_interval, NewtonPoly, Samples};
