use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{op}: domain error: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A series or iterative scheme ran out of terms before meeting its tolerance.
    #[error("{op}: no convergence after {max_terms} terms")]
    Convergence { op: &'static str, max_terms: usize },

    #[error("invalid parameter `{name}`: {msg}")]
    InvalidParameter { name: String, msg: String },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub(crate) fn param(name: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::InvalidParameter { name: name.into(), msg: msg.into() }
    }

    /// Process exit status used by the CLI: 2 for usage/config problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Usage(_) | Error::InvalidParameter { .. } => 2,
            Error::Io(_) => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
