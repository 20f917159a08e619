//! Core machinery for nearest-neighbour shifts of finite type on `Z^d`:
//! lattice geometry, patterns, local and global admissibility, an
//! arc-consistency extension solver, frontier transfer sweeps and
//! one-dimensional matrix tools.

pub mod admissibility;
pub mod counting;
pub mod error;
pub mod lattice;
pub mod onedim;
pub mod pattern;
pub mod periodic;
pub mod sft;
pub mod solver;
pub mod sweep;

pub use admissibility::{is_globally_admissible, Admissibility, Language, LineExact, LocalSuffices, PeriodicExtension};
pub use counting::count_locally_admissible_block;
pub use error::{LatticeError, SftError};
pub use lattice::{block, dist, half_rhomboid, lex_past, rhomboid, Distance, HalfRhomboid, Shape, Site};
pub use onedim::{entropy_1d, is_topologically_mixing_1d, recode_1d_to_nn, Witness1D};
pub use pattern::{Alphabet, Letter, Pattern};
pub use periodic::PeriodicPoint;
pub use sft::Nnsft;
pub use solver::extend_locally_admissible;
