use mbcoh_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("oracle check failed: {0}")]
    CheckFailed(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    /// 1 check failed, 2 domain/regime, 3 size guard, 4 discretization, 5 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                CoreError::SizeLimit { .. } => 3,
                CoreError::Discretization(_) => 4,
                CoreError::Io(_) => 5,
                _ => 2,
            },
            CliError::Usage(_) => 2,
            CliError::Io(_) => 5,
            CliError::CheckFailed(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
