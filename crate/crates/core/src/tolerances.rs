//! Numerical tolerances used across the crate.
//!
//! Every threshold that decides a pass/fail or a branch lives here so that
//! tests and the CLI read the same values.

/// Maximum deviation of `|x|` from 1 accepted for input samples.
pub const TOL_SPHERE: f64 = 1e-9;

/// Relative speed deviation allowed after arclength reparametrization.
pub const TOL_ARC: f64 = 1e-6;

/// Geodesic curvature below which the principal normal is undefined.
pub const TOL_FRENET: f64 = 1e-8;

/// Acceptance of a polynomial root / geodesic frequency.
pub const TOL_ROOT: f64 = 1e-9;

/// Max-norm distance under which two algebraic solutions are merged.
pub const TOL_DEDUP: f64 = 1e-6;

/// Relative tolerance of the curvature/torsion relation check.
pub const TOL_CLASS: f64 = 1e-6;

/// Projected-gradient (or first-variation) max-norm that stops a flow.
pub const TOL_FLOW: f64 = 1e-6;

/// Residual level regarded as "is a solution" for analytic pipelines.
pub const SOLUTION_ANALYTIC: f64 = 1e-6;

/// Residual level regarded as "is a solution" for spectral pipelines (N >= 256).
pub const SOLUTION_SPECTRAL: f64 = 1e-5;

/// Orthogonality / norm tolerance when validating ansatz vectors.
pub const TOL_ANSATZ: f64 = 1e-9;

/// Highest derivative order produced by spectral differentiation.
pub const MAX_SPECTRAL_ORDER: usize = 8;

/// Highest derivative order produced by closed-form differentiation.
pub const MAX_ANALYTIC_ORDER: usize = 16;

/// Armijo sufficient-decrease constant.
pub const ARMIJO_C: f64 = 1e-4;

/// Backtracking factor of the Armijo line search.
pub const BACKTRACK: f64 = 0.5;

/// Newton step halvings before a seed is abandoned.
pub const NEWTON_MAX_HALVINGS: usize = 40;

/// Newton iterations before divergence is declared.
pub const NEWTON_MAX_ITERS: usize = 200;
