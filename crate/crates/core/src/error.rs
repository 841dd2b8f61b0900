use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode label {0} appears in both tensor factors")]
    LabelCollision(String),
    #[error("mode label {0} appears more than once in a basis")]
    DuplicateLabel(String),
    #[error("unknown mode label {0}")]
    UnknownLabel(String),
    #[error("basis mismatch: expected [{expected}], found [{found}]")]
    BasisMismatch { expected: String, found: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite amplitude produced")]
    NonFinite,
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("branch weight {0} outside [0, 1]")]
    InvalidWeight(f64),
    #[error("invalid projector set: {0}")]
    InvalidProjectors(&'static str),
    #[error("operator is not normal; no orthonormal eigenbasis")]
    NotNormal,
    #[error("eigensolver failed to converge")]
    EigenFailure,
    #[error("cycle count must be at least 1")]
    InvalidCycles,
    #[error("odd cycle count required, got {0}: the closed-form shutter evolution holds only for odd N")]
    EvenCycles(u32),
    #[error("rotation angle must be finite and positive, got {0}")]
    InvalidTheta(f64),
    #[error("logical qubit is not normalized (|alpha|² + |beta|² = {0})")]
    InvalidQubit(f64),
    #[error("protocol consistency violated: {0}")]
    ProtocolConsistency(&'static str),
}
