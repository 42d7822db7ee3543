//! Polyharmonic curves on spheres: curve representations, covariant
//! derivatives and Frenet data, equation residuals, explicit solution
//! families, and variational tools.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ambient;
pub mod error;
pub mod families;
pub mod geometry;
pub mod io;
pub mod lagrangian;
pub mod residuals;
pub mod sampling;
pub mod scan;
pub mod spectral;
pub mod symbolic;
pub mod tolerances;
pub mod variational;

pub use error::{PolycurveError, Result};
