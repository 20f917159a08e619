//! Exact counts of locally admissible block fills.

use num_bigint::BigUint;

use crate::error::SftError;
use crate::lattice::block;
use crate::pattern::Pattern;
use crate::sft::Nnsft;
use crate::sweep::{free_sites, sweep, LocalWeights, SweepLimits, SweepResult};

/// `|L^{l.a.}_{B_n}|`, the number of locally admissible fills of `[-n, n]^d`
/// for `d ∈ {1, 2}`, by a column sweep with exact integers.
pub fn count_locally_admissible_block(x: &Nnsft, n: u32) -> Result<BigUint, SftError> {
    count_locally_admissible_block_with(x, n, SweepLimits::default())
}

pub fn count_locally_admissible_block_with(x: &Nnsft, n: u32, limits: SweepLimits) -> Result<BigUint, SftError> {
    if !(1..=2).contains(&x.dim()) {
        return Err(SftError::WrongDimension { expected: "1 or 2".into(), got: x.dim() });
    }
    let b = block(n, x.dim())?;
    let w = LocalWeights::uniform(x);
    let sites = free_sites(&b, x.alphabet_size());
    let r: SweepResult<BigUint> = sweep(&w, &sites, &Pattern::empty(x.dim()), limits)?;
    Ok(r.scalar())
}

/// Natural log of a big integer, accurate to a few ulps.
pub fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        let f: f64 = num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::INFINITY);
        return f.ln();
    }
    let shift = bits - 64;
    let top: BigUint = v >> shift;
    let f: f64 = num_traits::ToPrimitive::to_f64(&top).unwrap();
    f.ln() + shift as f64 * std::f64::consts::LN_2
}
