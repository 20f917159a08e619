//! Certification and refutation of mixing properties of nearest-neighbour
//! shifts of finite type: safe symbols, single-site and N-fillability,
//! strong irreducibility gaps, topological strong spatial mixing (TSSM),
//! first offenders, periodic points and pivot sequences.

pub mod certificate;
pub mod error;
pub mod local;
pub mod offenders;
pub mod periodic;
pub mod pivot;
pub mod search;
pub mod tssm;

pub use certificate::{certificate_chain, si_gap, tssm_gap, MixingCertificate, Property, Provenance};
pub use error::MixingError;
pub use local::{
    check_n_fillability, check_ssf, derive_strong_irreducibility, find_safe_symbols, smallest_fillable,
    spot_check_partial_boundaries, DEFAULT_FILL_LIMIT,
};
pub use offenders::{enumerate_first_offenders, DEFAULT_OFFENDER_LIMIT};
pub use periodic::{default_periods, find_periodic_point};
pub use pivot::pivot_sequence;
pub use search::{search_tssm_violation, Strategy};
pub use tssm::{check_tssm, check_tssm_in, ExhaustionReport, TssmBudget, TssmVerdict, Violation};
