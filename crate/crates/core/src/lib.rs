//! Truncated power series on the unit disk, the convolution operators
//! `L_n^σ` / `l_n^σ` that act on normalized analytic functions, the
//! two-parameter integral iteration of Carathéodory functions, and a
//! seeded harness that checks the sharp bounds of the resulting classes.
//!
//! Every operator here acts diagonally on Taylor coefficients, so the whole
//! crate is built on [`TruncatedSeries`] and coefficient multipliers.

pub mod classes;
pub mod error;
pub mod kernels;
pub mod operators;
pub mod parse;
pub mod series;
pub mod verify;

pub use classes::{CircleGrid, ClassSpec, Membership, Verdict};
pub use error::{Error, Result};
pub use kernels::{Multiplier, OperatorParams};
pub use operators::QuadratureConfig;
pub use series::{HerglotzMixture, SchlichtSeries, TruncatedSeries};
pub use verify::{Suite, SuiteConfig, VerificationReport};

pub use num_complex::Complex64;

/// Truncation order used when nothing else is specified.
pub const DEFAULT_ORDER: usize = 64;
