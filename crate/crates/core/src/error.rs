use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid model:\n{}", .0.join("\n"))]
    Validation(Vec<String>),

    #[error("{0}")]
    Usage(String),

    #[error("the zero polynomial has no weighted degree")]
    ZeroDegree,

    #[error("termination not reached by weight {reached}; supply --max-weight or verify transitivity")]
    TerminationCap { reached: i64 },

    #[error("case splitting exceeded the limit of {limit} {what}")]
    BranchLimit { what: &'static str, limit: usize },

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        let text = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let message = text.strip_suffix(&suffix).unwrap_or(&text).to_string();
        Error::Parse { line: e.line(), column: e.column(), message }
    }
}
