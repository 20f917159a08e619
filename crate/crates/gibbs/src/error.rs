use nnsft_core::{LatticeError, SftError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GibbsError {
    #[error(transparent)]
    Sft(#[from] SftError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("vertex weights must be finite (letter {0})")]
    InfiniteVertex(usize),
    #[error("boundary is not admissible for the region (partition function is zero)")]
    NonAdmissibleBoundary,
    #[error("boundary shape must equal the outer boundary of the region")]
    BoundaryShape,
    #[error("target must lie inside the region")]
    TargetOutsideRegion,
    #[error("column of height {height} exceeds the sweep limit {max}")]
    ColumnTooTall { height: usize, max: usize },
    #[error("region of {0} sites is too large for exact enumeration")]
    RegionTooLarge(usize),
}

impl From<LatticeError> for GibbsError {
    fn from(e: LatticeError) -> Self {
        GibbsError::Sft(SftError::Lattice(e))
    }
}
