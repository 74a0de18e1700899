use std::path::PathBuf;

/// Crate-wide error type.
///
/// Variants are grouped so the CLI can map them onto its exit codes:
/// configuration problems, missing upstream artifacts, and everything
/// else (bad or degenerate data, I/O).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),

    #[error("missing prerequisite `{path}` — run the `{stage}` stage first")]
    MissingPrerequisite { path: PathBuf, stage: &'static str },

    #[error("{file}: header is missing column `{column}`")]
    HeaderMismatch { file: PathBuf, column: String },

    #[error("{0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code for the CLI: 1 usage/config, 2 missing
    /// prerequisite, 3 data or I/O error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::MissingPrerequisite { .. } => 2,
            _ => 3,
        }
    }
}
