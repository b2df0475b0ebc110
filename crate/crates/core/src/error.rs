use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("incomplete cumulant table: no entry for {0}")]
    IncompleteTable(String),
    #[error("singular series: {0}")]
    SingularSeries(String),
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
}

impl Error {
    /// Stable machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::ResourceLimit(_) => "resource-limit",
            Error::IncompleteTable(_) => "incomplete-table",
            Error::SingularSeries(_) => "singular-series",
            Error::UnsupportedParameters(_) => "unsupported-parameters",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn limit(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
