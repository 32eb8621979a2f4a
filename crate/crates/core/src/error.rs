use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero has no representation in this numeration system")]
    ZeroInput,

    #[error("invalid Zeckendorf index set: {0}")]
    InvalidZeckendorf(String),

    #[error("invalid digit string: {0}")]
    InvalidDigits(String),

    #[error("invalid Ostrowski digits: {0}")]
    InvalidOstrowski(String),

    #[error("{0} is a perfect square; the surd is rational")]
    RationalSurd(i64),

    #[error("invalid quadratic surd: {0}")]
    InvalidSurd(String),

    #[error("continued fraction is not purely periodic")]
    NotPurelyPeriodic,

    #[error("invalid prime set: {0}")]
    InvalidPrimeSet(String),

    #[error("factorization effort budget exhausted on cofactor {cofactor}")]
    FactorBudgetExhausted { cofactor: String },

    #[error("height is undefined for zero")]
    ZeroHeight,

    #[error("invalid bound parameters: {0}")]
    InvalidBoundInput(String),

    #[error("interval still contains zero at the {bits}-bit precision cap")]
    PrecisionExhausted { bits: u32 },

    #[error("division by an interval containing zero")]
    IntervalDivByZero,

    #[error("invalid linear form input: {0}")]
    InvalidLinearForm(String),
}
