use thiserror::Error;

/// Errors produced anywhere in the approximation engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoughError {
    #[error("universe must contain at least one element")]
    EmptyUniverse,
    #[error("duplicate label `{0}` in universe")]
    DuplicateLabel(String),
    #[error("universe of {size} elements exceeds the absolute limit of {limit}")]
    UniverseTooLarge { size: usize, limit: usize },
    #[error("set width mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },
    #[error("element index {index} out of range for universe of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error(
        "universe of {size} elements exceeds the enumeration cap of {cap} (raise it with --max-enum)"
    )]
    EnumerationCapExceeded { size: usize, cap: usize },
    #[error("enumeration cap {0} is outside the supported range 1..=32")]
    InvalidCap(usize),
    #[error("accuracy is undefined for the empty set")]
    EmptySubject,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid set expression `{0}`")]
    SetExpression(String),
}

pub type Result<T, E = RoughError> = std::result::Result<T, E>;
