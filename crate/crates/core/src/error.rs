use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("not locally unitary: {0}")]
    NotLocallyUnitary(String),

    #[error("discontinuous section: {0}")]
    DiscontinuousSection(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("numerical failure: {message} (condition {condition:.3e})")]
    NumericalFailure { message: String, condition: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
