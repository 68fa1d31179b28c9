use std::error;
use std::fmt;

/// Errors produced by the solver library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation
    /// (non-positive gamma argument, evaluation before the series origin,
    /// a point off the spatial grid, ...).
    Domain(String),
    /// Two objects that must share the same algebra do not: mismatched
    /// fractional order, time warp, origin, or spatial grid.
    Incompatible(String),
    /// A series evaluation failed to meet its tail tolerance within the
    /// permitted number of terms, or produced a non-finite partial sum.
    NonConvergence { last_term: f64, max_terms: usize },
    /// A configuration value violates a documented invariant.
    Config(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Incompatible(msg) => write!(f, "incompatible operands: {msg}"),
            Error::NonConvergence {
                last_term,
                max_terms,
            } => write!(
                f,
                "series did not converge within {max_terms} terms (last term {last_term:e})"
            ),
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl error::Error for Error {}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
