use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// An exact algorithm hit its configured size or node cap.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// The input does not satisfy the hypotheses an operation relies on.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A self-check failed. This is a bug, never a valid outcome.
    #[error("internal error: {0}")]
    Internal(String),
    #[error("illegal move{}: {reason}", element.map(|e| format!(" (element {e})")).unwrap_or_default())]
    IllegalMove { element: Option<usize>, reason: String },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub(crate) fn illegal(element: Option<usize>, reason: impl Into<String>) -> Self {
        Error::IllegalMove { element, reason: reason.into() }
    }
}
