use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("box has zero width in every dimension and cannot be split")]
    DegenerateBox,

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {context}")]
    NumericalDomain { context: &'static str },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("scenario generation failed after {attempts} rejected drops")]
    GenerationFailed { attempts: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
