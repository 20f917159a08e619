use nnsft_core::{LatticeError, SftError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MixingError {
    #[error(transparent)]
    Sft(#[from] SftError),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    /// A pivot step had no admissible realisation. Under a correct TSSM
    /// certificate this cannot happen, so it points at the certificate.
    #[error("pivot step {step} at site {site} has no admissible realisation; the TSSM certificate is wrong")]
    PivotFailed { step: usize, site: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl From<LatticeError> for MixingError {
    fn from(e: LatticeError) -> Self {
        MixingError::Sft(e.into())
    }
}
