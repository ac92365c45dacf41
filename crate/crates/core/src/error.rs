use thiserror::Error;

/// Failures raised by the symbolic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("jet order overflow: order {required} exceeds r_max = {r_max}")]
    OrderOverflow { required: usize, r_max: usize },

    #[error("no value assigned to variable {0}")]
    MissingAssignment(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("vector field is not projectable: {0}")]
    NotProjectable(String),

    #[error("vector field is not vertical")]
    NotVertical,

    #[error("expected a horizontal {expected}-form")]
    NotHorizontal { expected: usize },

    #[error("bad contact structure: {0}")]
    Contact(String),

    #[error("invalid bundle: {0}")]
    Bundle(String),

    #[error("arity mismatch: {0}")]
    Arity(String),

    #[error("invalid Lie algebra data: {0}")]
    Algebra(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
