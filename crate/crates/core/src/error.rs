use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("malformed rational {0:?} (expected an integer or p/q)")]
    MalformedRational(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("slot convention mismatch: {left:?} vs {right:?}")]
    ConventionMismatch { left: String, right: String },

    #[error("slot {slot} out of range for a tensor with {arity} slots")]
    SlotOutOfRange { slot: usize, arity: usize },

    #[error("slots {0} and {1} cannot be paired with the requested contraction")]
    IncompatibleSlots(usize, usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dense tensor of arity {arity} refused for dimension {dim} (limit {limit})")]
    TooLarge { dim: usize, arity: usize, limit: usize },

    #[error("metric is singular")]
    SingularMetric,

    #[error("unsupported tensor arity {0}")]
    UnsupportedArity(usize),

    #[error("operation requires dimension at least {min}, got {dim}")]
    DimensionTooSmall { dim: usize, min: usize },
}
