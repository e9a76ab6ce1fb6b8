use thiserror::Error;

use crate::dyadic::Dyadic;

/// Errors raised by the exact evaluators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument that must be a positive integer was zero.
    #[error("{op}: argument must be positive, got 0")]
    ZeroArgument { op: &'static str },

    /// A precondition on the arguments does not hold.
    #[error("{op}: precondition violated: {reason}")]
    Domain { op: &'static str, reason: String },

    /// The exact result does not fit in the fixed-width representation.
    #[error("arithmetic overflow: exact result is not representable")]
    Overflow,

    /// A formula that must produce an integer produced a fractional dyadic.
    /// This is an implementation bug, not bad input.
    #[error("{op}: internal invariant violated, expected an integer but got {value}")]
    NonIntegral { op: &'static str, value: Dyadic },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        op,
        reason: reason.into(),
    }
}
