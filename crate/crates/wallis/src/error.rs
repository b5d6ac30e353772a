//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by the evaluation and oracle routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Dimension below the supported minimum of 3.
    #[error("dimension must be at least 3, got {0}")]
    DimensionTooSmall(usize),

    /// A real exponent violates the hypothesis beta_k > -1/2.
    #[error("exponent beta[{index}] = {value} must be greater than -1/2")]
    ExponentTooSmall { index: usize, value: f64 },

    /// A coordinate tagged as growing must be strictly positive.
    #[error("growing exponent beta[{index}] = {value} must be positive")]
    GrowingExponentNotPositive { index: usize, value: f64 },

    /// The set of growing coordinates may not be empty.
    #[error("at least one coordinate must be tagged as growing")]
    EmptyGrowingSet,

    /// A growing-coordinate index is outside the multi-index.
    #[error("coordinate index {index} out of range for dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },

    /// Argument outside a function's supported domain.
    #[error("argument {name} = {value} outside supported domain ({constraint})")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// Integer argument failed a parity or range precondition.
    #[error("index {value} invalid: {constraint}")]
    BadIndex { value: i64, constraint: &'static str },

    /// Symbolic derivative order above the supported cap.
    #[error("derivative order {0} exceeds cap of {1}")]
    DerivativeOrderTooLarge(u32, u32),

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature failed to converge: estimate {estimate}, error bound {error_bound} > tolerance {tolerance}")]
    QuadratureNonConvergence {
        estimate: f64,
        error_bound: f64,
        tolerance: f64,
    },

    /// Series truncation bound did not close before the term cap.
    #[error("series did not converge within {terms} terms (remaining bound {remainder_bound} > tolerance {tolerance})")]
    SeriesNonConvergence {
        terms: u32,
        remainder_bound: f64,
        tolerance: f64,
    },

    /// A series term is not integrable for the given real exponents.
    #[error("series term {term} has exponent {exponent} <= -1/2 in coordinate {index}; not integrable")]
    SeriesTermNotIntegrable {
        term: u32,
        index: usize,
        exponent: f64,
    },

    /// Operation requires integer exponents.
    #[error("{0}")]
    Unsupported(&'static str),

    /// Tolerance or sample-count argument invalid.
    #[error("invalid parameter {name} = {value}: {constraint}")]
    BadParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
