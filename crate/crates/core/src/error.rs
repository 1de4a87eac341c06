use thiserror::Error;

use crate::verdict::Counterexample;

/// Errors raised by the library. Verdict failures (a property that does not
/// hold) are not errors; they are reported through [`crate::Verdict`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("event `{0}` is controllable in one alphabet and uncontrollable in another")]
    ControllabilityMismatch(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("alphabet bounds violated: {0}")]
    AlphabetBounds(String),

    #[error("specification leaves the plant: {0}")]
    SpecOutsidePlant(Counterexample),

    #[error("specification is not prefix-closed: {0}")]
    NotPrefixClosed(Counterexample),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("projection is not an observer: {0}")]
    ObserverViolation(Counterexample),

    #[error("invalid generator: {0}")]
    Invariant(String),

    #[error("parse error in {location}: {message}")]
    Parse { location: String, message: String },

    #[error("bounded enumeration exceeded the budget of {budget} words")]
    DepthOverflow { budget: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
