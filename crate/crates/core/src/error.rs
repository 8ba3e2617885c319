//! Error type shared by every module of the kernel.

use thiserror::Error;

use crate::group::Point;

/// Errors raised by the Sol kernel.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolError {
    /// An exponential `e^{±z}` would leave the representable range.
    #[error("third coordinate {z} exceeds the overflow limit |z| <= {limit}")]
    DomainOverflow { z: f64, limit: f64 },

    /// Input that an operation cannot accept (origin, coincident points, non-finite values).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Parameter outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Neither analytic branch of the inverse curve parameters reproduced the point.
    #[error(
        "could not resolve curve parameters for {point:?}: candidates {candidates:?} \
         miss the point by {best_error:e}"
    )]
    BranchResolution {
        point: Point,
        candidates: Vec<[f64; 3]>,
        best_error: f64,
    },

    /// Three points span no proper triangle (coincident, or on one translation curve).
    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),

    /// Tetrahedron invariants are violated.
    #[error("degenerate tetrahedron: {0}")]
    DegenerateTetrahedron(String),

    /// An iterative solve failed from every starting point.
    #[error("no convergence after {attempts} start(s); best residual {best_residual:e}")]
    NoConvergence {
        attempts: usize,
        best_residual: f64,
        starts: Vec<Vec<f64>>,
    },
}

pub type Result<T> = std::result::Result<T, SolError>;
