use thiserror::Error;

/// Faults that prevent grading. These are never folded into a zero reward.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradeError {
    #[error("unknown task kind {0:?}")]
    UnknownTaskKind(String),
    #[error("invalid gold payload: {0}")]
    InvalidGold(String),
    #[error("unknown functional group {0:?}")]
    UnknownGroup(String),
    #[error("grading context lacks {0}")]
    MissingContext(&'static str),
    #[error("oracle unavailable: {0}")]
    OracleUnavailable(String),
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    #[error("record schema version {0} is not supported")]
    UnsupportedVersion(u64),
}

impl GradeError {
    pub fn code(&self) -> &'static str {
        match self {
            GradeError::UnknownTaskKind(_) => "unknown_task_kind",
            GradeError::InvalidGold(_) => "invalid_gold",
            GradeError::UnknownGroup(_) => "unknown_group",
            GradeError::MissingContext(_) => "missing_context",
            GradeError::OracleUnavailable(_) => "oracle_unavailable",
            GradeError::MalformedRecord(_) => "malformed_record",
            GradeError::UnsupportedVersion(_) => "unsupported_version",
        }
    }

    /// Transient faults worth retrying.
    pub fn is_transient(&self) -> bool {
        matches!(self, GradeError::OracleUnavailable(_))
    }
}
