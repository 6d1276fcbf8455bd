//! Weighted convolution algebras on the half line.
//!
//! The crate realizes the Fréchet algebra `A(ω) = ⋂ L¹(ω_n)` over an
//! increasing family of algebra weights on a uniform grid: weights and
//! weight families with mechanical checks of their growth conditions,
//! grid functions with causal convolution, weighted norms and Laplace
//! characters, finitely supported measures plus densities, and the
//! multiplier, derivation and dilation operators acting on them.

// guards such as `!(x > 0.0)` deliberately reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod family;
pub mod grid;
pub mod measures;
pub mod operators;
pub mod report;
pub mod sampling;
pub mod weights;

pub use num_complex::Complex64;

/// Crate version, echoed in run reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use family::{FamilyKind, WeightFamily};
pub use grid::{FunctionSpec, Grid, GridFunction};
pub use measures::{Atom, Measure, MeasureSpec};
pub use operators::{DerivationOp, DilationEndo};
pub use report::{CheckReport, Verdict, Witness};
pub use weights::{IntegerSubadditive, Weight, WeightKind};
