use thiserror::Error;

use crate::game::DilemmaClassification;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a social dilemma: {0}")]
    NotADilemma(DilemmaClassification),

    #[error("not resolvable: {0}")]
    NotResolvable(String),

    #[error("not available: {0}")]
    NotAvailable(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
