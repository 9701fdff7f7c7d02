use std::fmt;

/// Errors surfaced by the exact-arithmetic and decision layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A denominator was identically zero.
    ZeroDenominator,
    /// A supplied factorization does not multiply back to the denominator.
    BadFactorization(String),
    /// Two polynomials expected to be coprime share a factor.
    NotCoprime(String),
    /// The operation needs the denominator split into irreducible factors.
    FactorizationRequired(String),
    /// Skew-polynomial arithmetic on operators of different kinds.
    KindMismatch,
    /// Right division by the zero operator.
    ZeroDivisor,
    /// A supplied factor list failed validation (non-squarefree or
    /// overlapping factors).
    ValidationError(String),
    /// A twist scalar that must be a power of q was not.
    MalformedTwist(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroDenominator => write!(f, "zero denominator"),
            Error::BadFactorization(s) => write!(f, "bad factorization: {}", s),
            Error::NotCoprime(s) => write!(f, "not coprime: {}", s),
            Error::FactorizationRequired(s) => write!(f, "factorization required: {}", s),
            Error::KindMismatch => write!(f, "operator kind mismatch"),
            Error::ZeroDivisor => write!(f, "right division by zero operator"),
            Error::ValidationError(s) => write!(f, "validation error: {}", s),
            Error::MalformedTwist(s) => write!(f, "malformed twist: {}", s),
        }
    }
}

impl std::error::Error for Error {}
