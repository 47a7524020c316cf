use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A size or configuration constraint was violated. The message names it.
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("index {index} out of range (valid: 0..{bound})")]
    Index { index: usize, bound: usize },

    #[error("framing error: {0}")]
    Framing(String),

    #[error("channel is singular at bin {bin} (|H| = {magnitude:e})")]
    SingularChannel { bin: usize, magnitude: f64 },

    #[error("unknown system `{0}`")]
    UnknownSystem(String),

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
