use thiserror::Error;

use crate::combinatorics::Partition;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Long division left a nonzero remainder in the slice with this a-exponent.
    #[error("non-exact division at a^{a_exp}: remainder {remainder}")]
    NonExactDivision { a_exp: i64, remainder: String },

    #[error("not divisible by {divisor}: remainder {remainder}")]
    NotDivisible { divisor: String, remainder: String },

    #[error("not in Q[z^2, a^(+-1)]: {reason}")]
    NotInSubring { reason: String },

    #[error("weight mismatch: |{left}| != |{right}|")]
    WeightMismatch { left: Partition, right: Partition },

    #[error("fractional q-exponent survived in {context}")]
    ResidualFractionalExponent { context: String },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("invalid torus knot T({d},{m}): {reason}")]
    InvalidKnot { d: u32, m: i64, reason: String },

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
