//! Exact scalars: rationals, cyclotomic numbers, localized integrality and linear algebra.

mod cyclotomic;
mod linalg;
mod local;
mod rootvec;

pub use cyclotomic::{canonical_conductor, CycField, CycNum, RootSum};
pub use linalg::{determinant, rank, solve_exact, ExactSolver};
pub use local::{is_pm_integral, LocalRingSpec};
pub use rootvec::{RootAcc, RootVec};

use num_bigint::BigInt;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("expected {expected} coordinates, got {got}")]
    CoordinateLength { expected: usize, got: usize },
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("linear system has a {dim}-dimensional solution space")]
    AmbiguousSolution { dim: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("p = {p} divides M = {m}")]
    BadLocalRing { p: u64, m: u64 },
}
