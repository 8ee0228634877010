use thiserror::Error;

/// Failure to parse a textual scalar.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse scalar {input:?}: {reason}")]
pub struct ScalarParseError {
    pub input: String,
    pub reason: String,
}

impl ScalarParseError {
    pub fn new(input: &str, reason: impl Into<String>) -> Self {
        Self {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("structure constant index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid bracket entry ({i}, {j}): {reason}")]
    InvalidBracket { i: usize, j: usize, reason: String },

    #[error("Jacobi identity fails for basis triple ({0}, {1}, {2})")]
    JacobiViolated(usize, usize, usize),

    #[error("gram matrix is not symmetric positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("algebra is not solvable")]
    NotSolvable,

    #[error("vectors are linearly dependent")]
    Degenerate,

    #[error("singular linear map")]
    Singular,

    #[error("vector is not in the span of the given subspace")]
    NotInSpan,

    #[error("subspace is not closed under the bracket")]
    NotSubalgebra,

    #[error("invalid almost contact data: {0}")]
    InvalidStructure(String),

    #[error("invalid complex structure: {0}")]
    InvalidComplexStructure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("nilradical verification failed: {0}")]
    NilradicalVerification(String),

    #[error("root space decomposition failed: {0}")]
    RootDecomposition(String),

    #[error(transparent)]
    Scalar(#[from] ScalarParseError),

    #[error("definition file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
