use nnsft_core::{LatticeError, SftError};
use nnsft_gibbs::GibbsError;
use nnsft_mixing::MixingError;
use thiserror::Error;

use crate::orbit::Estimate;

#[derive(Debug, Error)]
pub enum PressureError {
    #[error(transparent)]
    Sft(#[from] SftError),
    #[error(transparent)]
    Gibbs(#[from] GibbsError),
    #[error(transparent)]
    Mixing(#[from] MixingError),
    #[error("no admissible boundary at orbit site {0}; the certificates do not fit this model")]
    NoAdmissibleBoundary(String),
    #[error("a TSSM certificate is required")]
    MissingCertificate,
    #[error("brackets at different n do not overlap; the certificates do not fit this model")]
    InconsistentBrackets,
    #[error("target width not reached; best bracket [{}, {}]", .0.lower, .0.upper)]
    NotConverged(Box<Estimate>),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl From<LatticeError> for PressureError {
    fn from(e: LatticeError) -> Self {
        PressureError::Sft(e.into())
    }
}
