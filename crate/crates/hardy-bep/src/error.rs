//! Error type shared by all modules.

use num_complex::Complex64;
use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, BepError>;

/// Failures reported by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BepError {
    /// Grid size is not a power of two or is below 8.
    #[error("grid size {0} must be a power of two and at least 8")]
    InvalidGrid(usize),

    /// Two operands live on different grids.
    #[error("grid mismatch: {left} vs {right} points")]
    GridMismatch { left: usize, right: usize },

    /// Sample vector length does not match the grid.
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A function required to be real has a significant imaginary part.
    #[error("function is not real: max imaginary part {0:e}")]
    NotReal(f64),

    /// A series required to be analytic has negative-frequency content.
    #[error("series is not analytic: coefficient {index} has modulus {modulus:e}")]
    NotAnalytic { index: i64, modulus: f64 },

    /// Integration or maximum over an empty set.
    #[error("empty arc set")]
    EmptySet,

    /// Arc list is malformed.
    #[error("invalid arc set: {0}")]
    InvalidArcs(String),

    /// Evaluation point is too close to (or outside) the unit circle.
    #[error("point {z} is within {margin:e} of the unit circle")]
    TooCloseToBoundary { z: Complex64, margin: f64 },

    /// Modulus data is negative or not finite.
    #[error("modulus is negative or not finite at grid index {0}")]
    NonPositiveModulus(usize),

    /// Blaschke product evaluated at one of its poles.
    #[error("evaluation at a pole of the Blaschke product: {0}")]
    Pole(Complex64),

    /// Conjugate gradient hit its iteration cap.
    #[error("conjugate gradient stopped after {iterations} iterations, relative residual {residual:e}")]
    CgNotConverged { iterations: usize, residual: f64 },

    /// The finitely constrained QP could not be solved.
    #[error("quadratic subproblem failed: {0}")]
    QpFailure(String),

    /// Exchange loop exhausted its round budget.
    #[error("exchange loop stopped after {rounds} rounds with violation {violation:e}")]
    ExchangeNotConverged { rounds: usize, violation: f64 },

    /// Parameter outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
