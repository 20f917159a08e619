//! Checks that only look at a single site or a small block: safe symbols,
//! single-site fillability and N-fillability.

use std::ops::ControlFlow;

use nnsft_core::lattice::cuboid;
use nnsft_core::pattern::full_mask;
use nnsft_core::solver::{extend_locally_admissible, for_each_extension};
use nnsft_core::{Letter, Nnsft, Pattern, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::certificate::{MixingCertificate, Property};
use crate::error::MixingError;

/// Default cap on the number of boundary letterings `check_n_fillability`
/// is willing to walk through.
pub const DEFAULT_FILL_LIMIT: u64 = 1 << 26;

/// Letters that may sit next to anything in every direction.
pub fn find_safe_symbols(x: &Nnsft) -> Vec<Letter> {
    (0..x.alphabet_size() as Letter)
        .filter(|&a| {
            (0..x.dim()).all(|axis| {
                // a at p with any b at p + e_axis, and any b at p - e_axis with a at p
                (0..x.alphabet_size() as Letter).all(|b| x.allows(axis, a, b) && x.allows(axis, b, a))
            })
        })
        .collect()
}

/// Single-site fillability for the presented relations: every lettering of
/// the `2d` neighbours of a site leaves some letter for the site itself.
///
/// The neighbours are placed one at a time; only the set of still-possible
/// centre masks is carried, so the work is bounded by the number of distinct
/// masks rather than `|A|^{2d}`.
pub fn check_ssf(x: &Nnsft) -> bool {
    let k = x.alphabet_size() as Letter;
    let mut masks: FxHashSet<u64> = FxHashSet::default();
    masks.insert(full_mask(x.alphabet_size()));
    for axis in 0..x.dim() {
        for sign in [1, -1] {
            let mut next = FxHashSet::default();
            for &m in &masks {
                for b in 0..k {
                    let r = m & x.compatible_with_neighbour(axis, sign, b);
                    if r == 0 {
                        return false;
                    }
                    next.insert(r);
                }
            }
            masks = next;
        }
    }
    true
}

/// The block `[1, N]^d` and its outer boundary.
pub fn fill_block(n: u32, d: usize) -> Result<(Shape, Shape), MixingError> {
    if n == 0 {
        return Err(MixingError::Invalid("N must be at least 1".into()));
    }
    let block = cuboid(&vec![1; d], &vec![n as i64; d])?;
    let bd = block.boundary()?;
    Ok((block, bd))
}

/// N-fillability: every locally admissible lettering of `∂[1,N]^d` leaves a
/// locally admissible fill of the block. Refuses with a budget error when
/// `|A|^{|∂[1,N]^d|}` exceeds `limit`.
pub fn check_n_fillability(x: &Nnsft, n: u32, limit: u64) -> Result<bool, MixingError> {
    let (block, bd) = fill_block(n, x.dim())?;
    let size = (x.alphabet_size() as f64).powi(bd.len() as i32);
    if size > limit as f64 {
        return Err(MixingError::Budget(format!("{size:.3e} boundary letterings exceed the limit {limit}")));
    }
    let mut boundaries = Vec::new();
    for_each_extension(x, &Pattern::empty(x.dim()), &bd, |delta| {
        boundaries.push(delta.clone());
        ControlFlow::Continue(())
    })?;
    let ok = boundaries
        .par_iter()
        .map(|delta| extend_locally_admissible(x, delta, &block).map(|w| w.is_some()))
        .try_fold(|| true, |acc, r| r.map(|b| acc && b))
        .try_reduce(|| true, |a, b| Ok(a && b))?;
    Ok(ok)
}

/// Smallest `N ≤ n_max` for which the shift is N-fillable. Sizes whose
/// boundary enumeration exceeds `limit` are skipped.
pub fn smallest_fillable(x: &Nnsft, n_max: u32, limit: u64) -> Result<Option<u32>, MixingError> {
    for n in 1..=n_max {
        match check_n_fillability(x, n, limit) {
            Ok(true) => return Ok(Some(n)),
            Ok(false) | Err(MixingError::Budget(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Strong irreducibility with gap `2(N+1)` for the smallest N-fillability
/// found up to `n_max`. `None` is not a refutation.
pub fn derive_strong_irreducibility(x: &Nnsft, n_max: u32) -> Result<Option<MixingCertificate>, MixingError> {
    Ok(smallest_fillable(x, n_max, DEFAULT_FILL_LIMIT)?.map(|n| {
        MixingCertificate::implied(Property::StrongIrreducible { gap: 2 * (n + 1) }, Property::NFillable { n })
    }))
}

/// Outcome of [`spot_check_partial_boundaries`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialBoundaryReport {
    pub sampled: usize,
    /// Partial boundaries that were locally admissible but had no fill.
    pub unfillable: Vec<Pattern>,
}

/// Samples letterings of random subsets `T ⊆ ∂[1,N]^d` uniformly and checks
/// that every locally admissible one still leaves a fill of the block, as it
/// must if the full-boundary condition holds.
pub fn spot_check_partial_boundaries(x: &Nnsft, n: u32, samples: usize, seed: u64) -> Result<PartialBoundaryReport, MixingError> {
    let (block, bd) = fill_block(n, x.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PartialBoundaryReport { sampled: 0, unfillable: Vec::new() };
    let mut attempts = 0usize;
    while report.sampled < samples && attempts < samples * 1000 {
        attempts += 1;
        let keep = rng.gen_range(0.2..1.0);
        let mut pairs = Vec::new();
        for s in bd.iter() {
            if rng.gen_bool(keep) {
                pairs.push((s.clone(), rng.gen_range(0..x.alphabet_size()) as Letter));
            }
        }
        let delta = Pattern::from_pairs(x.dim(), pairs)?;
        if !x.is_locally_admissible(&delta) {
            continue;
        }
        report.sampled += 1;
        if extend_locally_admissible(x, &delta, &block)?.is_none() {
            report.unfillable.push(delta);
        }
    }
    Ok(report)
}
