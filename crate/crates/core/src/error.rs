use thiserror::Error;

/// Errors raised by the analysis, coding and simulation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violates the documented precondition of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An encoder or decoder was driven from a state that cannot serve the request.
    #[error("state error: {0}")]
    State(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
