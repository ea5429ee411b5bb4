use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("GF({p}^{m}) exceeds the supported field size 2^16")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("GF({order}) is not a quadratic extension")]
    NotQuadratic { order: u32 },
    #[error("element {0} is not in the fixed subfield")]
    NotInSubfield(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// An internal consistency check failed; indicates a bug rather than
    /// bad input.
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
