use crate::parse::{ExprError, ParseError};

/// Errors of the command line, each with its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid chart file: {0}")]
    Chart(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Truncation(graded_pbw::Error),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{0}")]
    Algebra(graded_pbw::Error),
}

impl CliError {
    /// 2 for unreadable input, 3 for truncation overflow, 4 for a failed
    /// precondition and 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Chart(_) | CliError::Parse(_) => 2,
            CliError::Truncation(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Algebra(_) => 1,
        }
    }
}

impl From<graded_pbw::Error> for CliError {
    fn from(e: graded_pbw::Error) -> Self {
        use graded_pbw::Error;
        match e {
            Error::TruncationOverflow { .. } => CliError::Truncation(e),
            Error::RequiresTorsionFree => CliError::Precondition(e.to_string()),
            Error::InvalidChart(_) | Error::InvalidConnection(_) => CliError::Chart(e.to_string()),
            e => CliError::Algebra(e),
        }
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::Parse(p) => CliError::Parse(p),
            ExprError::Algebra(a) => a.into(),
        }
    }
}
