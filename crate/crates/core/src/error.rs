use thiserror::Error;

/// Errors raised by parsing, validation and the rewriting engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("entry not in D[omega]: {0}")]
    NotInRing(String),

    #[error("matrix is not unitary")]
    NotUnitary,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("rule {rule} does not match at position {pos}")]
    NoMatch { rule: u8, pos: usize },

    #[error("rule {rule}: side condition violated")]
    ConstraintViolated { rule: u8 },

    #[error("unknown rule id {0}")]
    UnknownRule(u8),

    #[error("derivation invalid at step {step}: {reason}")]
    InvalidDerivation { step: usize, reason: String },

    #[error("certificate budget of {0} commutation nodes exceeded")]
    Budget(usize),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
