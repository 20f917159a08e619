//! Nearest-neighbour interactions on `Z^d` and the Gibbs specifications
//! they define: energies, partition functions, exact conditional
//! probabilities by enumeration and by frontier sweeps, and a registry of
//! standard models.

pub mod error;
pub mod interaction;
pub mod models;
pub mod spec;

pub use error::GibbsError;
pub use interaction::{Energy, Interaction};
pub use models::{model, Model, MODEL_NAMES};
pub use spec::{
    column_height, partition_function, specification_prob, transfer_conditional, transfer_conditional_with, LogZ, SpecQuery,
    DEFAULT_MAX_COLUMN, EXACT_SITE_LIMIT,
};
