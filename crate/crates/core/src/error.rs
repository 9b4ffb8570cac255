use thiserror::Error;

/// Errors raised by the algebra routines.
///
/// `Parse` is kept apart from the domain errors so that front ends can
/// distinguish malformed input from mathematically invalid input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different structures: {0}")]
    Mismatch(String),
    #[error("zero has no {0}")]
    ZeroInput(&'static str),
    #[error("polynomial is not irreducible: {0}")]
    Reducible(String),
    #[error("polynomial is not monic: {0}")]
    NotMonic(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
