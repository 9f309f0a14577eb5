use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AcmError {
    #[error("payload must contain at least one word")]
    EmptyPayload,

    #[error("payload has {got} words, buffer is configured for {expected}")]
    PayloadLength { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, AcmError>;
