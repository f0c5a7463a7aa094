use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero input")]
    ZeroInput,
    #[error("element is not integral: {0}")]
    NonIntegralInput(String),
    #[error("factors are not coprime modulo p")]
    NotCoprime,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("degree {0} exceeds the exact-mode bound {1}")]
    DegreeTooLarge(usize, usize),
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("twist parameter is zero")]
    ZeroTwist,
    #[error("bad reduction at {0}")]
    BadReduction(String),
    #[error("denominator not invertible at {0}")]
    DenominatorClash(String),
    #[error("finite field too large: {0}")]
    FieldTooLarge(String),
    #[error("not enough good primes: {0}")]
    InsufficientGoodPrimes(String),
    #[error("curve has nontrivial 2-torsion over the base field")]
    NontrivialTwoTorsion,
    #[error("twist parameter is a square")]
    SquareTwist,
    #[error("theorem violated: {0}")]
    TheoremViolation(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("incompatible orders {0} and {1}")]
    IncompatibleOrders(u64, u64),
    #[error("divisor is not on the curve")]
    DivisorNotOnCurve,
    #[error("group too large: {0}")]
    GroupTooLarge(String),
    #[error("bad reduction prime {0}")]
    BadReductionPrime(u64),
    #[error("dimension mismatch: expected {0}, got {1}")]
    DimensionMismatch(usize, usize),
    #[error("unknown identity {0}")]
    UnknownIdentity(String),
    #[error("unknown model {0}")]
    UnknownModel(String),
    #[error("height bound {0} too large")]
    HeightTooLarge(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("computation failed: {0}")]
    Failed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
