//! Spatial mixing experiments: exact finite-volume WSM/SSM decay profiles,
//! maximal configurations of the Lipschitz height shift, and closed-form
//! rate and threshold formulas.

pub mod error;
pub mod maxconfig;
pub mod profile;
pub mod rate;

pub use error::SsmError;
pub use maxconfig::{below_max_bound, below_max_probability, lipschitz_sft, max_config_oracle, max_config_xg};
pub use profile::{
    fit_decay, ssm_profile, wsm_profile, BoundaryFamily, DecayFit, DecayProfile, DiscrepancyWitness, ProfileBudget, ProfileGeometry,
    ProfilePoint,
};
pub use rate::{andes_rate, ball_size, rate_implies_tssm, rate_tssm_threshold, RateCertificate};
