//! Entropy and pressure bounds for nearest-neighbour models: locally
//! admissible block counts, exact one-dimensional pressure, two-sided
//! pressure brackets from a periodic orbit, and the `D_μ`/`c_μ` bounds.

pub mod dmu;
pub mod entropy;
pub mod error;
pub mod orbit;

pub use dmu::{cmu_lower_bound, dmu_min, CmuBound, CmuForm, Dmu, LogMin};
pub use entropy::{friedland_upper_bounds, pressure_1d, round_down, round_up};
pub use error::PressureError;
pub use orbit::{
    a_phi_at, conditional_at_boundary, conditional_bounds_at, gamarnik_katz_bounds, pressure_bounds, pressure_estimate,
    BoundPair, ConditionalBounds, Decider, Estimate, PressureJob, SiteBounds, DEFAULT_NEG_LOG_CAP, DEFAULT_SCHEDULE,
};
