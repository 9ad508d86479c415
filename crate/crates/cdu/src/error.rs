//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),

    #[error("modulus is reducible over F_{p}: {factor_hint}")]
    ReducibleModulus { p: u64, factor_hint: String },

    #[error("modulus degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("subfield degree {m} does not divide extension degree {n}")]
    NonDivisorSubfieldDegree { m: u32, n: u32 },

    #[error("mixed cyclotomic orders: {0} vs {1}")]
    MixedCyclotomicOrder(u64, u64),

    #[error("cyclotomic coefficient overflow (128-bit)")]
    CoefficientOverflow,

    #[error("field shape does not match family {family}: {reason}")]
    ShapeMismatch { family: String, reason: String },

    #[error("hypothesis violated for family {family}: {reason}")]
    HypothesisViolation { family: String, reason: String },

    #[error("family {0} has no expanded form")]
    UnsupportedFamily(String),

    #[error("character sum does not divide exactly by q: {0}")]
    NonIntegralCount(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("witness not found: {0}")]
    WitnessNotFound(String),

    #[error("unsupported suite parameters: {0}")]
    UnsupportedParameters(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
