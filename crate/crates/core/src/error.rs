use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{h} exceeds the supported limit of 2^30")]
    FieldTooLarge { p: u64, h: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("invalid prime power {0:?}: {1}")]
    InvalidPrimePower(String, String),
    #[error("element code {code} is out of range for a field of order {order}")]
    CodeOutOfRange { code: u64, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("{sub} does not divide the extension degree {h}")]
    NotADivisor { sub: u32, h: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
