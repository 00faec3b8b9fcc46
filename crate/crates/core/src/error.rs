use thiserror::Error;

use crate::decompose::DecomposeFailure;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("{value} lies outside {range}")]
    OutOfRange { value: String, range: &'static str },
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("invalid continued fraction expansion: {0}")]
    InvalidExpansion(String),
    #[error("empty expansion has no continuant matrix")]
    EmptyExpansion,
    #[error("quotient bound must be at least 1, got {0}")]
    InvalidBound(u64),
    #[error("invalid oracle query: {0}")]
    InvalidQuery(String),
    #[error("{0} does not fit the machine-integer search routines")]
    Overflow(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("prime window exhausted for q = {q} after widening and reducing r to 1")]
    WindowExhausted { q: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Decomposition(Box<DecomposeFailure>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
