use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes shared by every module of the crate.
///
/// The variants are grouped the way the command-line front end reports them:
/// domain and regime violations, size guards, discretization failures and I/O.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size limit exceeded: {what} is {actual}, maximum is {limit}")]
    SizeLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("outside the valid regime: {0}")]
    Regime(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("coherence of order {0} is undefined (order must be at least 2)")]
    UndefinedOrder(usize),

    #[error("discretization failure: {0}")]
    Discretization(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
