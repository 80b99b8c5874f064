use crate::model::ModelState;

/// Errors raised by the samplers, oracles and data model.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid data: {0}")]
    Data(String),
    #[error("computation error: {0}")]
    Computation(String),
    #[error("chain {chain} produced a non-finite state at iteration {iteration}: {reason}")]
    Divergence {
        chain: usize,
        iteration: usize,
        reason: String,
        snapshot: Box<ModelState>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

pub(crate) fn computation<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Computation(msg.into()))
}
