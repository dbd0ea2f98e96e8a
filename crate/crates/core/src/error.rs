use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A point or parameter lies outside the model's coordinate domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Matrix entries overflowed the guard while iterating; `completed` is the
    /// number of factors that were multiplied in before the guard tripped.
    #[error("range error after {completed} iterates: {reason}")]
    Range { completed: i64, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid map description: {0}")]
    Description(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
