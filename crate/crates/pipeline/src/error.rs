use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Core(#[from] stabcert_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed certificate: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown stage {0:?}")]
    UnknownStage(String),
    #[error("fixture {name}: {msg}")]
    Fixture { name: &'static str, msg: String },
    #[error("invalid reference configuration: {0}")]
    InvalidReference(String),
}

pub type Result<T> = std::result::Result<T, PipelineError>;
