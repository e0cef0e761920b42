use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A distribution was constructed with parameters outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A distribution spec string such as `normal:0,1` could not be parsed.
    #[error("invalid distribution spec `{spec}`: {reason}")]
    Spec { spec: String, reason: String },

    /// Caller supplied arguments that violate an operation's preconditions.
    #[error("{0}")]
    Usage(String),

    /// An argument lies outside the mathematical domain of the operation.
    #[error("{0}")]
    Domain(String),

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("line {line}: cannot parse `{token}` as a number")]
    Parse { line: usize, token: String },

    #[error("{count} point(s) beyond F0 support")]
    BeyondSupport { count: usize },

    #[error("{0}")]
    Grid(String),

    #[error("not in condition class on this grid")]
    NotInClass,
}

impl Error {
    /// True for errors caused by how the operation was invoked rather than by
    /// the data it was given.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_) | Error::Spec { .. } | Error::Usage(_)
        )
    }
}
