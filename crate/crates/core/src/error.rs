use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime congruent to 1 mod 3")]
    InvalidPrime(u64),
    #[error("invalid radicand {0}: must be a cubefree integer > 1")]
    InvalidRadicand(u64),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("modulus is not a prime of Z[zeta3] coprime to 3")]
    NotAPrimeModulus,
    #[error("element is divisible by the modulus")]
    DivisibleByModulus,
    #[error("norm is divisible by 3")]
    NormDivisibleBy3,
    #[error("zero element has no valuation")]
    ZeroElement,
    #[error("ideals belong to different orders")]
    MixedOrders,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("maximal order computation did not converge at {0}")]
    MaximalizationFailed(u64),
    #[error("relation search exhausted its effort budget: {0}")]
    EffortExhausted(String),
    #[error("no smooth representative found for ideal of norm {0}")]
    SmoothnessSearchExhausted(String),
    #[error("structural invariant violated: {0}")]
    InvariantViolated(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
