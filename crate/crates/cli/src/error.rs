use nnsft_core::{LatticeError, SftError};
use nnsft_gibbs::GibbsError;
use nnsft_mixing::MixingError;
use nnsft_pressure::PressureError;
use nnsft_ssm::SsmError;
use thiserror::Error;

/// Failures that end a run without a result.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 4,
            CliError::Budget(_) => 3,
            CliError::Internal(_) => 1,
        }
    }

    pub fn input(msg: impl Into<String>) -> CliError {
        CliError::Input(msg.into())
    }
}

impl From<SftError> for CliError {
    fn from(e: SftError) -> Self {
        match e {
            SftError::Budget(m) => CliError::Budget(m),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<GibbsError> for CliError {
    fn from(e: GibbsError) -> Self {
        match e {
            GibbsError::Sft(s) => s.into(),
            e @ GibbsError::ColumnTooTall { .. } | e @ GibbsError::RegionTooLarge(_) => CliError::Budget(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<MixingError> for CliError {
    fn from(e: MixingError) -> Self {
        match e {
            MixingError::Sft(s) => s.into(),
            MixingError::Budget(m) => CliError::Budget(m),
            MixingError::Invalid(m) => CliError::Input(m),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<PressureError> for CliError {
    fn from(e: PressureError) -> Self {
        match e {
            PressureError::Sft(s) => s.into(),
            PressureError::Gibbs(g) => g.into(),
            PressureError::Mixing(m) => m.into(),
            PressureError::MissingCertificate => {
                CliError::Input("the pressure bracket needs a TSSM certificate; none was derived, pass --assume-tssm GAP".into())
            }
            PressureError::Invalid(m) => CliError::Input(m),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<SsmError> for CliError {
    fn from(e: SsmError) -> Self {
        match e {
            SsmError::Sft(s) => s.into(),
            SsmError::Gibbs(g) => g.into(),
            SsmError::Budget(m) => CliError::Budget(m),
            e @ (SsmError::Invalid(_) | SsmError::UnsupportedDimension(_)) => CliError::Input(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
