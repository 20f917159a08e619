use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("coordinate {0} exceeds the supported range")]
    Overflow(i64),
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SftError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("alphabet must have between 1 and {max} letters, got {got}")]
    AlphabetSize { got: usize, max: usize },
    #[error("duplicate alphabet label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown letter label {0:?}")]
    UnknownLabel(String),
    #[error("letter index {0} outside the alphabet")]
    LetterOutOfRange(usize),
    #[error("pattern values do not match its shape ({sites} sites, {values} values)")]
    PatternLength { sites: usize, values: usize },
    #[error("site {0} appears twice with different letters")]
    ConflictingSite(String),
    #[error("expected {expected} axis relations, got {got}")]
    AxisCount { expected: usize, got: usize },
    #[error("region and fixed pattern overlap")]
    Overlap,
    #[error("periodic point is not valid: {0}")]
    InvalidPeriodicPoint(String),
    #[error("gap must be positive")]
    NonPositiveGap,
    #[error("the shift is empty")]
    EmptyShift,
    #[error("operation requires dimension {expected}, got {got}")]
    WrongDimension { expected: String, got: usize },
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
