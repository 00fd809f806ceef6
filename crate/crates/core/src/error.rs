use thiserror::Error;

/// Errors raised by constructions, decision procedures and series arithmetic.
///
/// Axiom violations of a table under test are *not* errors; checkers report
/// them in-band through [`crate::kernel::CheckReport`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity {
        what: String,
        needed: usize,
        limit: usize,
    },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// A structural result that must hold for every valid input did not.
    /// Seeing this means either the input was malformed in a way the
    /// checkers did not catch, or the result itself fails on this input.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
