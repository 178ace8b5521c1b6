use thiserror::Error;

/// Errors raised by the geometry, jet and form operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("height must be positive, got t = {0}")]
    NonPositiveHeight(f64),

    #[error("degenerate Möbius transformation (ad - bc = 0)")]
    DegenerateMobius,

    #[error("jet order {available} is insufficient, {required} required")]
    InsufficientOrder { required: usize, available: usize },

    #[error("basepoint mismatch between operands")]
    BasepointMismatch,

    #[error("form degree {0} out of range for this operation")]
    DegreeOutOfRange(usize),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("ill-conditioned lift system (condition number {0:e})")]
    IllConditioned(f64),

    #[error("field is not holomorphic (max |f_zbar| = {0:e})")]
    NotHolomorphic(f64),

    #[error("boundary field must not depend on t")]
    DependsOnHeight,

    #[error("parallel flow is singular (denominator {0:e})")]
    SingularFlow(f64),

    #[error("degenerate 2-jet: f'(z) = 0")]
    DegenerateJet,

    #[error("complex length of the identity is undefined")]
    IdentityLength,

    #[error("branch error: {0}")]
    Branch(String),

    #[error("finite-difference step underflow")]
    StepUnderflow,

    #[error("precondition '{what}' violated (max violation {violation:e})")]
    Precondition { what: String, violation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
