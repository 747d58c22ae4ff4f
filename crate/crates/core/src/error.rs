use thiserror::Error;

use crate::matrix::Matrix;
use crate::scalar::ScalarField;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(ScalarField, ScalarField),

    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A lift or colift was requested for an arrow that does not satisfy
    /// the annihilation precondition.
    #[error("{context}: composite is not zero, residual {residual}")]
    NonZeroComposite { context: String, residual: Matrix },

    #[error("no factorization: {0}")]
    NoLift(String),

    #[error("square does not commute (right∘top − bottom∘left = {residual})")]
    NotCommutative { residual: Matrix },

    #[error("square is not semi-cartesian")]
    NotSemiCartesian,

    #[error("invalid snake diagram: {}", .0.join("; "))]
    InvalidSnake(Vec<String>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("generation failed: {0}")]
    Generation(String),

    /// An identity that holds by construction failed; this is a bug.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
