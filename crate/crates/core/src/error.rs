use legpath_symbolic::SymbolicError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    /// A type invariant does not hold; `path` names the offending field(s).
    #[error("invariant violated at {path}: {message}")]
    Invariant { path: String, message: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("the given forms do not extend to a coframe: {0}")]
    CoframeDegenerate(String),
    #[error("{0} exceeds the supported bound")]
    BoundExceeded(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("unsupported format_version {0}")]
    UnsupportedVersion(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

pub(crate) fn invariant(path: impl Into<String>, message: impl Into<String>) -> CoreError {
    CoreError::Invariant { path: path.into(), message: message.into() }
}
