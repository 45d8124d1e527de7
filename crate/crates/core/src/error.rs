use thiserror::Error;

/// Errors raised by the library. Relation *violations* are not errors; they
/// are reported through the various report types.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed fusion data: {0}")]
    Structure(String),

    #[error("invalid fusion data: {0}")]
    InvalidFusion(String),

    #[error("object mismatch: {0}")]
    ObjectMismatch(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
