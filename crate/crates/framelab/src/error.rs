//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("vector {index} has length {found}, expected dimension {expected}")]
    DimensionMismatch { index: usize, found: usize, expected: usize },

    #[error("vector {index} contains a non-finite entry")]
    NonFinite { index: usize },

    #[error("need at least as many vectors as dimensions, got N = {count} < n = {dim}")]
    TooFewVectors { count: usize, dim: usize },

    #[error("vectors do not span: smallest singular value {sigma_min:.3e} <= tolerance {tol:.3e}")]
    NotAFrame { sigma_min: f64, tol: f64 },

    #[error("duality violation: max residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    DualityViolation { residual: f64, tol: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid erasure set: {0}")]
    InvalidErasure(String),

    #[error("enumeration of {count} erasure sets exceeds the cap {cap}")]
    EnumerationCapExceeded { count: u128, cap: u128 },

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("eigensolver failed to converge: {0}")]
    NonConvergence(String),

    #[error("matrix is not unitary: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("operator too ill-conditioned: estimate {cond:.3e} exceeds cap {cap:.3e}")]
    IllConditioned { cond: f64, cap: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("random frame generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },
}
