use nnsft_core::{LatticeError, SftError};
use nnsft_gibbs::GibbsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SsmError {
    #[error(transparent)]
    Sft(#[from] SftError),
    #[error(transparent)]
    Gibbs(#[from] GibbsError),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("the boundary admits no admissible fill")]
    NotExtendable,
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl From<LatticeError> for SsmError {
    fn from(e: LatticeError) -> Self {
        SsmError::Sft(e.into())
    }
}
