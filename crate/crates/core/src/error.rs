use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector length {0} is odd; symplectic coordinates come in pairs")]
    OddLength(usize),

    #[error("ambient dimension {0} is out of range")]
    DimensionOutOfRange(usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate point {0}")]
    DuplicatePoint(String),

    #[error("codeline {0} does not project onto a line of the factor space")]
    DegenerateProjection(usize),

    #[error("the zero code has no minimum distance")]
    ZeroCode,

    #[error("no strength-3 system of {lines} lines exists in PG({proj_dim},2)")]
    NoLineSystem { lines: usize, proj_dim: usize },

    #[error("mixed ambient dimensions {0} and {1}")]
    MixedAmbient(usize, usize),

    #[error("generators {0:#x} and {1:#x} do not span a line")]
    DegenerateLine(u32, u32),
}

pub type Result<T> = std::result::Result<T, Error>;
