//! Error type shared by every module in this crate.
//!
//! All constructors and operations validate their inputs up front and
//! return one of these variants instead of panicking. Variants carry the
//! offending field name and value so callers can surface precise messages.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Validation and computation errors.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A numeric field was NaN or infinite.
    NonFinite { field: &'static str, value: f64 },
    /// A numeric field fell outside its closed domain `[lo, hi]`.
    OutOfRange {
        field: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    /// A range was given with `lo > hi`.
    InvertedRange {
        field: &'static str,
        lo: f64,
        hi: f64,
    },
    /// A count that must be at least one was zero.
    ZeroCount { field: &'static str },
    /// An action set was constructed with no actions.
    EmptyActionSet,
    /// Two actions in one set share an id.
    DuplicateActionId { id: u32 },
    /// A weight vector summed to zero (or less) where a positive total is required.
    NonPositiveWeightSum { what: &'static str, sum: f64 },
    /// A single weight entry was negative where only nonnegative entries are allowed.
    NegativeWeight {
        what: &'static str,
        index: usize,
        value: f64,
    },
    /// Two paired slices differ in length.
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    /// A probability vector does not sum to one.
    NotADistribution { sum: f64 },
    /// An operation requiring input data received none.
    EmptyInput { what: &'static str },
    /// A statistical routine received fewer samples than it supports.
    InsufficientSamples { n: usize, min: usize },
    /// A series has zero variance, so correlation is undefined for it.
    DegenerateVariance { series: &'static str },
    /// A correlation magnitude at or beyond one where the routine needs |r| < 1.
    CorrelationAtUnity { r: f64 },
    /// An iterative numerical routine failed to converge within its budget.
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },
    /// The analytic correlation oracle cannot handle the requested setup.
    UnsupportedOracle { reason: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite { field, value } => {
                write!(f, "{field} must be finite, got {value}")
            }
            Error::OutOfRange {
                field,
                value,
                lo,
                hi,
            } => write!(f, "{field} must lie in [{lo}, {hi}], got {value}"),
            Error::InvertedRange { field, lo, hi } => {
                write!(f, "{field} range has lo > hi ({lo} > {hi})")
            }
            Error::ZeroCount { field } => write!(f, "{field} must be at least 1"),
            Error::EmptyActionSet => write!(f, "action set must contain at least one action"),
            Error::DuplicateActionId { id } => {
                write!(f, "duplicate action id {id} within one action set")
            }
            Error::NonPositiveWeightSum { what, sum } => {
                write!(f, "{what} weights must sum to a positive value, got {sum}")
            }
            Error::NegativeWeight { what, index, value } => {
                write!(f, "{what} weight at index {index} is negative ({value})")
            }
            Error::LengthMismatch {
                what,
                expected,
                actual,
            } => write!(f, "{what}: expected length {expected}, got {actual}"),
            Error::NotADistribution { sum } => {
                write!(f, "probabilities must sum to 1, got {sum}")
            }
            Error::EmptyInput { what } => write!(f, "{what} must not be empty"),
            Error::InsufficientSamples { n, min } => {
                write!(f, "need at least {min} samples, got {n}")
            }
            Error::DegenerateVariance { series } => {
                write!(
                    f,
                    "series {series} has zero variance; correlation is undefined"
                )
            }
            Error::CorrelationAtUnity { r } => {
                write!(f, "|r| must be strictly below 1, got {r}")
            }
            Error::NoConvergence { what, iterations } => {
                write!(f, "{what} did not converge within {iterations} iterations")
            }
            Error::UnsupportedOracle { reason } => {
                write!(f, "analytic correlation oracle unavailable: {reason}")
            }
        }
    }
}

impl std::error::Error for Error {}
