use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus polynomial is not irreducible of degree {degree} over GF({characteristic})")]
    NotIrreducible { characteristic: u32, degree: u32 },
    #[error("field of order {order} exceeds the supported limit 2^20")]
    FieldTooLarge { order: u64 },
    #[error("operands belong to different fields ({left} vs {right})")]
    MixedFields { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("N={n} does not divide q-1={}: GF({order}) has no element of order {n}", order - 1)]
    NoSuchRoot { order: u64, n: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("duplicate interpolation point")]
    DuplicatePoint,

    #[error("duplicate evaluation point at positions {0} and {1}")]
    DuplicateEvaluationPoint(usize, usize),
    #[error("column multiplier at position {0} is zero")]
    ZeroMultiplier(usize),
    #[error("code dimension {k} is invalid for length {n}")]
    BadDimension { k: usize, n: usize },
    #[error("codes are defined on different evaluation points")]
    MismatchedEvaluationPoints,
    #[error("exhaustive check needs {count} minors, limit is {limit}")]
    TooLargeToVerify { count: u128, limit: u128 },
    #[error("bad zero set: {0}")]
    BadZeroSet(String),

    #[error("invalid scheme parameters: {0}")]
    InvalidParams(String),
    #[error("field of order {q} is too small for {n} workers (need q >= N)")]
    FieldTooSmall { q: u64, n: usize },
    #[error("internal invariant broken: interference matrix has m_(P+1) = 0")]
    LemmaViolation,
    #[error("partition error: {0}")]
    PartitionError(String),
    #[error("P must be even, got P={0}")]
    OddP(usize),
    #[error("scheme requires GF({expected}), got GF({actual})")]
    WrongField { expected: u64, actual: u64 },
    #[error("not enough responses: {0}")]
    NotEnoughResponses(String),
    #[error("decode failed: {0}")]
    DecodeFailed(String),
    #[error("state space of {size} exceeds the exhaustive limit {limit}")]
    StateSpaceTooLarge { size: u128, limit: u128 },

    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
