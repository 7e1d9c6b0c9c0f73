use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precision mismatch: {left} vs {right}")]
    PrecisionMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A search or enumeration would exceed its configured bound.
    #[error("bound exceeded: {what} is {value}, limit {limit}")]
    BoundExceeded {
        what: String,
        value: u128,
        limit: u128,
    },

    #[error("hypothesis fails: {0}")]
    HypothesisFailed(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn bound(what: impl Into<String>, value: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::BoundExceeded {
            what: what.into(),
            value: value.into(),
            limit: limit.into(),
        }
    }

    /// Domain refusals (bounds, failed hypotheses) as opposed to malformed input.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::BoundExceeded { .. } | Error::HypothesisFailed(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
