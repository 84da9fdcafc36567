//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by context construction, per-curve statistics, and the
/// counting operations built on top of them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {0} is too small; only primes p > 3 are supported")]
    PrimeTooSmall(u64),
    #[error("p = {0} exceeds the supported table capacity ({1})")]
    CapacityExceeded(u64, u64),
    #[error("curve y^2 = x^3 + {a}x + {b} is singular mod {p}")]
    SingularCurve { p: u64, a: u64, b: u64 },
    #[error("character index {j} out of range 0..={max}")]
    IndexOutOfRange { j: u64, max: u64 },
    #[error("invalid angle interval [{0}, {1}]; need 0 <= alpha < beta <= pi")]
    InvalidInterval(f64, f64),
    #[error("modulus m must be >= 1, got {0}")]
    InvalidM(i64),
    #[error("t = 0 has no Euler-product constant; use the averaged pi/3 main term")]
    ZeroTrace,
    #[error("the whole class lies in a = 0 or b = 0; minimal equation undefined")]
    UndefinedForSpecialClass,
    #[error("invalid statistic: {0}")]
    InvalidStatistic(String),
    #[error("class seeds do not match a rebuilt table: {0}")]
    SeedMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
