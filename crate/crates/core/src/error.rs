use thiserror::Error;

/// Errors shared by every module of the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point is not a member of the cone")]
    NotMember,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("unsupported cone shape: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("undecided: {0}")]
    Undecided(String),

    /// A computed certificate contradicted an independently checked fact.
    #[error("internal invariant breach: {0}")]
    InvariantBreach(String),
}

pub type Result<T> = std::result::Result<T, Error>;
