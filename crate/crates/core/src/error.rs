use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    CompositeModulus(u128),
    #[error("extension degree {0} is outside 1..=16")]
    DegreeOutOfRange(u32),
    #[error("field of size {0} is too large for this operation")]
    FieldTooLarge(String),
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("polynomial must be nonzero")]
    ZeroPolynomial,
    #[error("generator system is empty")]
    EmptySystem,
    #[error("polynomial degree {0} is below 2")]
    DegreeTooSmall(usize),
    #[error("letter {letter} is outside 1..={k}")]
    LetterOutOfRange { letter: u32, k: usize },
    #[error("degenerate generator: generator {index} has degree {degree} after reduction")]
    DegenerateGenerator { index: usize, degree: i64 },
    #[error("explosion guard: {0}")]
    ExplosionGuard(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("orbit truncated at cap {0}")]
    Truncated(usize),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("guaranteed bound failed: {0}")]
    GuaranteeViolated(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("report has no rows")]
    EmptyReport,
    #[error("io error: {0}")]
    Io(String),
}

/// Coarse classification used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Precondition,
    Resource,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            Parse { .. } | InvalidConfig(_) => ErrorClass::Usage,
            FieldTooLarge(_) | ExplosionGuard(_) | Truncated(_) | TooLarge(_) => {
                ErrorClass::Resource
            }
            GuaranteeViolated(_) | Io(_) => ErrorClass::Internal,
            _ => ErrorClass::Precondition,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
