use num_bigint::BigUint;
use thiserror::Error;

/// Errors shared by every module of the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a mathematical precondition (zero where a
    /// positive integer is required, a composite where a prime is required,
    /// a non-increasing bound sequence, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data failed validation; the message names the offending
    /// index, line or flag.
    #[error("validation error: {0}")]
    Validation(String),

    /// A configured resource cap (enumeration size, retry budget) was hit.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// A count does not fit in the result type.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Factorization gave up on a cofactor after exhausting the retry
    /// budget. The partial factorization found so far is preserved so
    /// callers can degrade gracefully instead of dropping known primes.
    #[error("incomplete factorization of {value}: unfactored cofactor {cofactor}")]
    IncompleteFactorization {
        value: BigUint,
        cofactor: BigUint,
        /// (prime, exponent) pairs established before the budget ran out.
        partial: Vec<(BigUint, u32)>,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Validation(_) | Error::Io(_) => 2,
            Error::Resource(_) | Error::Overflow(_) | Error::IncompleteFactorization { .. } => 3,
        }
    }
}
