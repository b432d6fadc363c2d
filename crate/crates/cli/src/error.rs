use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Numerical(#[from] oscfield::Error),

    #[error("{0} validation check(s) failed")]
    Validation(usize),

    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Io { .. } => 1,
            Self::Numerical(_) => 2,
            Self::Validation(_) => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
