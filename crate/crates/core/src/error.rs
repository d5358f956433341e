use thiserror::Error;

use crate::hermitian::HermPoly;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures reported by the library. Certificate-carrying variants keep the
/// offending object so callers can inspect or serialize it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} must be positive")]
    NonPositive { what: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coefficient table is not hermitian at key {0}")]
    NotHermitian(String),

    #[error("denominator is too close to zero (|q(z)| = {magnitude:e})")]
    PoleProximity { magnitude: f64 },

    #[error("denominator vanishes at the origin")]
    DenominatorVanishesAtOrigin,

    #[error("duplicate sphere radius t = {0}")]
    DuplicateRadius(String),

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("claimed fold {step} is not a fold: {reason}")]
    NotAFold {
        step: usize,
        reason: String,
        witness: Box<HermPoly>,
    },

    #[error("denominator degree {denominator_degree} exceeds the bound {bound} certified at step {step}")]
    DegreeViolation {
        step: usize,
        bound: i64,
        denominator_degree: i64,
    },

    #[error("numerator and denominator share a common factor on every sampled line")]
    NotReduced,

    #[error("map is not an infinity-fold sphere map")]
    NotInftyFold,

    #[error("gram identity failed: {0}")]
    GramMismatch(String),

    #[error("rows are not orthonormal (max deviation {deviation:e})")]
    RowsNotOrthonormal { deviation: f64 },

    #[error("slack too large: {0}; shrink |a|")]
    SlackTooLarge(String),

    #[error("constructed map failed validation: {0}")]
    ValidationFailed(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant failed: {0}")]
    Internal(String),
}
