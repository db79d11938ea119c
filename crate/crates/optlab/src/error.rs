use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] optlab_core::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        1
    }
}
