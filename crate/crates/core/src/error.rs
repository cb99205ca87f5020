use thiserror::Error;

use crate::group::Backend;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("backend mismatch: expected {expected}, found {found}")]
    BackendMismatch { expected: Backend, found: Backend },

    #[error("operation `{op}` is not supported on the {backend} backend")]
    Unsupported { op: &'static str, backend: Backend },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("index {index} is outside the valid range of `{sequence}` (first index {first})")]
    InvalidIndex {
        sequence: String,
        index: usize,
        first: usize,
    },

    #[error("calibration failed for set #{index}: {reason}")]
    Calibration { index: usize, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}
