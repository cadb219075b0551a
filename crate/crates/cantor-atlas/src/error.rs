use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// One or more structural constraints are violated; each entry names one.
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    /// Root bracketing failed (endpoints do not straddle a sign change).
    #[error("bracket error: {0}")]
    Bracket(String),

    /// An iteration cap was exhausted before convergence.
    #[error("iteration limit exceeded: {0}")]
    IterationLimit(String),

    /// A digit exceeds the alphabet of its level.
    #[error("invalid digit {digit} at level {level} (base {base})")]
    InvalidDigit { digit: u32, level: usize, base: u32 },

    /// An enumeration would exceed the configured cell budget.
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    /// A representation is in the rejected (non-canonical) dual form.
    #[error("non-canonical representation: {0}")]
    NonCanonical(String),

    /// An internal cross-check failed; indicates a bug, not bad input.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
