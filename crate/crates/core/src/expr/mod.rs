//! Exact sparse multivariate polynomials over ℚ, their reduction to prime
//! fields, and a text parser.

mod map;
mod modp;
mod parse;
mod poly;

use thiserror::Error;

pub use map::{substitute, PolyMap};
#[cfg(test)]
pub(crate) use modp::pow_mod;
pub use modp::{ReducedPoly, MAX_MODULUS};
pub use parse::{parse_poly, ParseError, ParseErrorKind};
pub(crate) use poly::int_scalar;
pub use poly::{DegreeInfo, ExactScalar, Monomial, MultiPoly, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("ring mismatch: ({}) vs ({})", left.join(","), right.join(","))]
    RingMismatch { left: Vec<String>, right: Vec<String> },
    #[error("expected {expected} coordinates, got {got}")]
    PointLength { expected: usize, got: usize },
    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),
    #[error("duplicate variable {0:?}")]
    DuplicateVariable(String),
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("a coefficient denominator is divisible by {prime}")]
    DenominatorDivisible { prime: u64 },
    #[error("modulus {0} out of range")]
    ModulusOutOfRange(u64),
    #[error("polynomial is not (weighted) homogeneous")]
    NotHomogeneous,
    #[error("chart coordinate {chart} is not normalized to 1")]
    BadChart { chart: usize },
    #[error("the zero vector is not a projective point")]
    ZeroPoint,
    #[error(transparent)]
    Parse(#[from] ParseError),
}
