use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),
    #[error("mismatched primes: {0} vs {1}")]
    MismatchedPrime(u64, u64),
    #[error("element is not a unit")]
    NonUnit,
    #[error("insufficient precision: need at least {needed}, have {have}")]
    InsufficientPrecision { needed: u32, have: u32 },
    #[error("precision {precision} too large for p = {p} (p^N must stay below 2^62)")]
    PrecisionOverflow { p: u64, precision: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid minimal-polynomial target: {0}")]
    InvalidTarget(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("element is not in the stabilizer subgroup S^0_2")]
    NotInS0,
    #[error("element fails the norm-one check")]
    NotNormOne,
    #[error("element is not p-integral")]
    NotIntegral,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("certificate parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
