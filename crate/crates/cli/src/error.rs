use thiserror::Error;

/// Failures of a command, each with its process exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },

    #[error("invalid input at {path}: {msg}")]
    Invalid { path: String, msg: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("golden mismatch: {0}")]
    Mismatch(String),

    #[error("internal invariant breach: {0}")]
    Breach(String),

    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) | CliError::Breach(_) => 1,
            CliError::Syntax { .. } | CliError::Invalid { .. } | CliError::Io(_) => 2,
            CliError::Unsupported(_) => 3,
        }
    }

    pub fn invalid(path: &str, msg: impl Into<String>) -> Self {
        CliError::Invalid {
            path: path.to_string(),
            msg: msg.into(),
        }
    }
}

impl From<nicecone::Error> for CliError {
    fn from(e: nicecone::Error) -> Self {
        use nicecone::Error as E;
        match e {
            E::InvariantBreach(m) => CliError::Breach(m),
            E::DimensionMismatch { .. } | E::NotSymmetric | E::NotMember => CliError::invalid("input", e.to_string()),
            E::Unsupported(_) | E::CapExceeded(_) | E::Precondition(_) | E::Undecided(_) => {
                CliError::Unsupported(e.to_string())
            }
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
