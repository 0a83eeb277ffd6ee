use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation orders differ ({left} vs {right})")]
    CapMismatch { left: usize, right: usize },

    #[error("truncation order {cap} is too small, need at least {needed}")]
    CapTooSmall { needed: usize, cap: usize },

    #[error("series has zero constant term and is not invertible")]
    NotInvertible,

    #[error("inner series has nonzero constant term; substitution needs a delta series")]
    NotDelta,

    #[error("lambda = {0} is not allowed for Frobenius-Euler polynomials (must differ from 1)")]
    InvalidLambda(Rational),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
