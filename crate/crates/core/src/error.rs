use thiserror::Error;

/// Errors raised by the algebra primitives and condition checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (negative time,
    /// `Re z < 0`, out-of-range descriptor parameter, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A lookup or resample fell outside the tabulated / sampled range.
    #[error("range error: {0}")]
    Range(String),
    /// Two grid functions were combined on different grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    /// The grid step is too coarse to represent the requested object.
    #[error("resolution error: {0}")]
    Resolution(String),
    /// Invalid combination of check parameters.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
