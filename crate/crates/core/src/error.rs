//! Crate-wide error type.

use crate::scalar::Complex;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Gamma function evaluated within `1e-12` of a nonpositive integer.
    #[error("gamma pole at z = {z}")]
    Pole { z: Complex },

    /// Argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// No vertical-line contour satisfies the pole constraints.
    #[error("no feasible contour: {0}")]
    InfeasibleContour(String),

    /// A numerator Gamma argument hit a pole on the integration grid.
    #[error("pole on contour: gamma argument {arg} near a nonpositive integer")]
    PoleOnContour { arg: Complex },

    /// Refinement exhausted its budget without meeting the tolerance.
    #[error("unconverged: error estimate {estimate:e} above tolerance {tolerance:e}")]
    Unconverged { estimate: f64, tolerance: f64 },

    /// Vector arguments of incompatible lengths.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// Satake parameters must be pairwise distinct for the bialternant.
    #[error("repeated Satake parameter")]
    RepeatedParameter,

    /// Rank outside the implemented range.
    #[error("unsupported rank n = {0}")]
    UnsupportedRank(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
