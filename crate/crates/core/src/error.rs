use thiserror::Error;

/// Errors reported by the arithmetic, factorization and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation is undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,

    #[error("expected a nonconstant polynomial")]
    ConstantInput,

    #[error("{0} is not irreducible")]
    NotIrreducible(String),

    #[error("{0} is not a square")]
    NotSquare(String),

    #[error("index {index} is out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{0} is not (unitary) perfect in the requested mode")]
    NotPerfect(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
