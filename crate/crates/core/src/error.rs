use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An infinite sum or integral hit its effort limit before meeting its
    /// stopping rule. `partial` is the best estimate available at that point.
    #[error("not converged after {effort} evaluations (partial result {partial:e})")]
    NotConverged { partial: f64, effort: usize },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
