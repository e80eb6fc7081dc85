use alloc::string::String;

/// Errors raised by the algebraic operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("invalid connection: {0}")]
    InvalidConnection(String),
    #[error("truncation overflow: weight {requested} exceeds the limit {limit}")]
    TruncationOverflow { requested: u32, limit: u32 },
    #[error("operation requires a torsion-free connection")]
    RequiresTorsionFree,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
