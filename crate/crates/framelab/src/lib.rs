//! Finite-frame erasure analysis.
//!
//! The crate builds frames and dual pairs over complex n-space, evaluates
//! worst-case erasure error under three measures (Frobenius norm, spectral
//! radius, numerical radius), checks the algebraic characterizations of the
//! optimal dual-pair classes, and searches the dual manifold of a fixed
//! frame for better duals.
//!
//! Modules:
//! - [`linalg`]: dense complex matrices and small eigensolvers,
//! - [`frame`]: frames, frame operators, duals, and structural predicates,
//! - [`erasure`]: erasure sets, the error operator, and the three measures,
//! - [`optimality`]: theoretical optima, class membership, invariance maps,
//! - [`constructions`]: harmonic frames, optimal pair constructions, RNG,
//! - [`search`]: derivative-free minimax search over duals of a frame,
//! - [`io`]: JSON/CSV interchange formats.

pub mod constructions;
pub mod erasure;
pub mod error;
pub mod frame;
pub mod io;
pub mod linalg;
pub mod optimality;
pub mod search;

pub use error::FrameError;
pub use frame::{DualPair, Frame, FrameProperties, PairUniformity};
pub use linalg::{CMatrix, HermitianMatrix, C64};

/// Default absolute tolerance on matrix-entry residuals.
pub const DEFAULT_TOL: f64 = 1e-9;
