use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An input lies outside the domain on which an identity or series is valid.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown generator `{name}` at byte {pos}")]
    UnknownGenerator { name: String, pos: usize },

    #[error("missing assignment for generator `{0}`")]
    MissingAssignment(String),

    #[error("resource limit: {what} exceeded bound {bound}")]
    ResourceLimit { what: String, bound: usize },

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("element is not a member of {0}")]
    Membership(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::HypothesisViolation(msg.into())
    }
}
