use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Malformed generator, strategy or experiment description.
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] mb_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

pub(crate) fn config(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}
