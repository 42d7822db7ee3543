//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::variational::EnergyTrace;

#[derive(Debug, Error)]
pub enum PolycurveError {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("derivative order {requested} exceeds the supported maximum {max}")]
    UnsupportedOrder { requested: usize, max: usize },

    #[error("discrete curves need an even sample count of at least 16, got {0}")]
    BadSampleCount(usize),

    #[error("frequencies are not rationally related; the curve can only be evaluated analytically")]
    IrrationalFrequencies,

    #[error("tangent vanishes at sample {0}; cannot reparametrize by arclength")]
    VanishingTangent(usize),

    #[error("torsion undefined: curvature vanishes on {undefined} of {total} samples")]
    UndefinedTorsion { undefined: usize, total: usize },

    #[error("curve spans {0} ambient dimensions; a 3-dimensional space form needs at most 4")]
    NotInThreeSpaceForm(usize),

    #[error("space form with K = {0} has no embedding; only the unit sphere (K = 1) is supported here")]
    UnsupportedSpaceForm(f64),

    #[error("unknown Lagrangian id `{0}`")]
    UnknownLagrangian(String),

    #[error("second variation mismatch: closed form {closed_form}, finite difference {finite_difference}")]
    SecondVariationMismatch {
        closed_form: f64,
        finite_difference: f64,
    },

    #[error("line search stalled after {} iterations", .0.iterations.len())]
    LineSearchStall(Box<EnergyTrace>),

    #[error("Newton iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, PolycurveError>;
