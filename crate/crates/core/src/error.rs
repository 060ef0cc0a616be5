use thiserror::Error;

use crate::exactlin::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: FieldSpec, found: FieldSpec },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("subspace is not contained in the span of the ambient vectors (vector {index})")]
    NotContained { index: usize },

    #[error("prime {p} is too small: computation needs p > {required}")]
    FieldTooSmall { p: u64, required: u64 },

    #[error("{what} {value} out of range (allowed {allowed})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        allowed: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("no generic linear form found after {attempts} samples over {field}")]
    GenericityFailure { attempts: usize, field: FieldSpec },
}

pub type Result<T> = std::result::Result<T, Error>;
