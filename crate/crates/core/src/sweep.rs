//! Frontier transfer sweeps.
//!
//! Sites are processed one at a time in a caller-chosen order (normally
//! lexicographic, i.e. column by column along axis 1). The state is the tuple
//! of letters on the *frontier*: processed sites that still have an
//! unprocessed neighbour, plus every *kept* site. Free sites are summed out
//! once their last neighbour is processed; kept sites stay in the state, so
//! one sweep produces a value for every assignment of the kept sites at once.
//!
//! Values live in a [`SweepValue`] semiring. States are held in sorted
//! vectors and merged in a fixed order, so results are bit-for-bit
//! reproducible, including when kept sites are pinned to single letters.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::error::SftError;
use crate::lattice::Site;
use crate::pattern::{Letter, Pattern};
use crate::sft::Nnsft;

/// Log-weights of a nearest-neighbour model together with its hard constraints.
#[derive(Clone, Debug)]
pub struct LocalWeights {
    pub sft: Nnsft,
    /// `vertex[a]` is the log-weight contributed by letter `a` at a free site.
    pub vertex: Vec<f64>,
    /// `edge[axis][a * size + b]`: log-weight of `a` at `p`, `b` at `p + e_axis`;
    /// only read for allowed pairs.
    pub edge: Vec<Vec<f64>>,
}

impl LocalWeights {
    /// All weights zero: sweeps count admissible fills.
    pub fn uniform(sft: &Nnsft) -> LocalWeights {
        let k = sft.alphabet_size();
        LocalWeights { sft: sft.clone(), vertex: vec![0.0; k], edge: vec![vec![0.0; k * k]; sft.dim()] }
    }

    pub fn size(&self) -> usize {
        self.sft.alphabet_size()
    }
}

/// Semiring of sweep values.
pub trait SweepValue: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    /// Multiplies by `exp(log_weight)`.
    fn times(&self, log_weight: f64) -> Self;
}

/// Log-domain sums: the value `x` stands for `exp(x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogSum(pub f64);

impl SweepValue for LogSum {
    fn zero() -> Self {
        LogSum(f64::NEG_INFINITY)
    }
    fn one() -> Self {
        LogSum(0.0)
    }
    fn is_zero(&self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
    fn add_assign(&mut self, other: &Self) {
        self.0 = log_add_exp(self.0, other.0);
    }
    fn times(&self, w: f64) -> Self {
        LogSum(self.0 + w)
    }
}

/// Max-plus values: the heaviest single fill instead of the sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogMax(pub f64);

impl SweepValue for LogMax {
    fn zero() -> Self {
        LogMax(f64::NEG_INFINITY)
    }
    fn one() -> Self {
        LogMax(0.0)
    }
    fn is_zero(&self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
    fn add_assign(&mut self, other: &Self) {
        self.0 = self.0.max(other.0);
    }
    fn times(&self, w: f64) -> Self {
        LogMax(self.0 + w)
    }
}

/// Exact counting; weights are ignored.
impl SweepValue for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn times(&self, _w: f64) -> Self {
        self.clone()
    }
}

/// `log(exp(a) + exp(b))` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Summed out; carries its vertex weight.
    Free,
    /// Stays in the output key; no vertex weight, and no weight or
    /// constraint on edges to other kept or fixed sites.
    Kept,
}

/// One site of a sweep.
#[derive(Clone, Debug)]
pub struct SweepSite {
    pub site: Site,
    pub role: Role,
    /// Letters this site may take.
    pub mask: u64,
}

/// Sweep output: a value per assignment of the kept sites.
#[derive(Clone, Debug)]
pub struct SweepResult<V> {
    /// Kept sites in processing order.
    pub kept: Vec<Site>,
    /// Assignments (letters in `kept` order) with nonzero value, sorted by key.
    pub entries: Vec<(Vec<Letter>, V)>,
}

impl<V: SweepValue> SweepResult<V> {
    /// The total when there are no kept sites.
    pub fn scalar(&self) -> V {
        let mut acc = V::zero();
        for (_, v) in &self.entries {
            acc.add_assign(v);
        }
        acc
    }

    /// Value for a given kept assignment (zero if absent).
    pub fn lookup(&self, letters: &[Letter]) -> V {
        self.entries
            .binary_search_by(|e| e.0.as_slice().cmp(letters))
            .map(|i| self.entries[i].1.clone())
            .unwrap_or_else(|_| V::zero())
    }
}

/// Limits on sweep size.
#[derive(Clone, Copy, Debug)]
pub struct SweepLimits {
    pub max_states: usize,
}

impl Default for SweepLimits {
    fn default() -> Self {
        SweepLimits { max_states: 40_000_000 }
    }
}

struct Plan {
    /// For each sweep site: (earlier sweep neighbour index, axis, sign) where
    /// sign = +1 means the neighbour is at `p + e_axis`.
    earlier: Vec<Vec<(usize, usize, i32)>>,
    /// For each sweep site: fixed neighbour letters (letter, axis, sign).
    fixed: Vec<Vec<(Letter, usize, i32)>>,
    /// Sites whose last neighbour is the given index (free sites only).
    retire_after: Vec<Vec<usize>>,
}

fn plan(sites: &[SweepSite], fixed: &Pattern, dim: usize) -> Result<Plan, SftError> {
    let index: FxHashMap<&Site, usize> = sites.iter().enumerate().map(|(i, s)| (&s.site, i)).collect();
    if index.len() != sites.len() {
        return Err(SftError::Invalid("sweep sites must be distinct".into()));
    }
    let n = sites.len();
    let mut earlier = vec![Vec::new(); n];
    let mut fixed_nb = vec![Vec::new(); n];
    let mut last = (0..n).collect::<Vec<_>>();
    for (i, s) in sites.iter().enumerate() {
        if fixed.get(&s.site).is_some() {
            return Err(SftError::Overlap);
        }
        for axis in 0..dim {
            for sign in [1, -1] {
                let q = s.site.step(axis, sign)?;
                if let Some(&j) = index.get(&q) {
                    if j < i {
                        earlier[i].push((j, axis, sign));
                    }
                    last[i] = last[i].max(j);
                } else if let Some(b) = fixed.get(&q) {
                    fixed_nb[i].push((b, axis, sign));
                }
            }
        }
    }
    let mut retire_after = vec![Vec::new(); n];
    for (i, s) in sites.iter().enumerate() {
        if s.role == Role::Free {
            retire_after[last[i]].push(i);
        }
    }
    Ok(Plan { earlier, fixed: fixed_nb, retire_after })
}

/// Runs a sweep over `sites` (in the given order) next to the `fixed` pattern.
pub fn sweep<V: SweepValue>(
    w: &LocalWeights,
    sites: &[SweepSite],
    fixed: &Pattern,
    limits: SweepLimits,
) -> Result<SweepResult<V>, SftError> {
    let dim = w.sft.dim();
    let k = w.size();
    let bits = (usize::BITS - (k.max(2) - 1).leading_zeros()) as usize;
    let max_slots = 128 / bits;
    let p = plan(sites, fixed, dim)?;
    let letter_mask: u128 = (1u128 << bits) - 1;

    let mut slot_of = vec![usize::MAX; sites.len()];
    let mut free_slots: Vec<usize> = (0..max_slots).rev().collect();
    let mut states: Vec<(u128, V)> = vec![(0, V::one())];

    for (i, s) in sites.iter().enumerate() {
        let Some(slot) = free_slots.pop() else {
            return Err(SftError::Budget(format!("frontier exceeds {max_slots} sites")));
        };
        slot_of[i] = slot;
        // static restrictions from fixed neighbours
        let mut base = s.mask & w.sft.alphabet().full_mask();
        let mut fixed_w = vec![0.0f64; k];
        for &(b, axis, sign) in &p.fixed[i] {
            if s.role == Role::Kept {
                continue;
            }
            base &= w.sft.compatible_with_neighbour(axis, sign, b);
            for (a, fw) in fixed_w.iter_mut().enumerate() {
                if base >> a & 1 == 1 {
                    *fw += edge_weight(w, axis, sign, a as Letter, b);
                }
            }
        }
        let mut next: Vec<(u128, V)> = Vec::with_capacity(states.len() * 2);
        for (key, val) in &states {
            let mut mask = base;
            for &(j, axis, sign) in &p.earlier[i] {
                if s.role == Role::Kept && sites[j].role == Role::Kept {
                    continue;
                }
                let b = ((key >> (slot_of[j] * bits)) & letter_mask) as Letter;
                mask &= w.sft.compatible_with_neighbour(axis, sign, b);
            }
            let mut rest = mask;
            while rest != 0 {
                let a = rest.trailing_zeros() as Letter;
                rest &= rest - 1;
                let mut lw = if s.role == Role::Free { w.vertex[a as usize] + fixed_w[a as usize] } else { 0.0 };
                for &(j, axis, sign) in &p.earlier[i] {
                    if s.role == Role::Kept && sites[j].role == Role::Kept {
                        continue;
                    }
                    let b = ((key >> (slot_of[j] * bits)) & letter_mask) as Letter;
                    lw += edge_weight(w, axis, sign, a, b);
                }
                let nk = key | ((a as u128) << (slot * bits));
                next.push((nk, val.times(lw)));
            }
        }
        // retire free sites whose neighbourhood is complete
        let mut clear: u128 = 0;
        for &r in &p.retire_after[i] {
            clear |= letter_mask << (slot_of[r] * bits);
            free_slots.push(slot_of[r]);
        }
        if clear != 0 {
            for e in next.iter_mut() {
                e.0 &= !clear;
            }
        }
        next.sort_by_key(|e| e.0);
        states = merge_sorted(next);
        if states.len() > limits.max_states {
            return Err(SftError::Budget(format!("{} sweep states exceed the limit", states.len())));
        }
    }

    let kept_idx: Vec<usize> = (0..sites.len()).filter(|&i| sites[i].role == Role::Kept).collect();
    let mut entries: Vec<(Vec<Letter>, V)> = states
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(key, v)| {
            let letters = kept_idx
                .iter()
                .map(|&i| ((key >> (slot_of[i] * bits)) & letter_mask) as Letter)
                .collect();
            (letters, v)
        })
        .collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(SweepResult { kept: kept_idx.iter().map(|&i| sites[i].site.clone()).collect(), entries })
}

fn merge_sorted<V: SweepValue>(v: Vec<(u128, V)>) -> Vec<(u128, V)> {
    let mut out: Vec<(u128, V)> = Vec::with_capacity(v.len());
    for (k, val) in v {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1.add_assign(&val),
            _ => out.push((k, val)),
        }
    }
    out
}

/// Weight of the edge between `a` at `p` and `b` at `p + sign·e_axis`.
#[inline]
fn edge_weight(w: &LocalWeights, axis: usize, sign: i32, a: Letter, b: Letter) -> f64 {
    let k = w.size();
    if sign > 0 {
        w.edge[axis][a as usize * k + b as usize]
    } else {
        w.edge[axis][b as usize * k + a as usize]
    }
}

/// Free sites in lexicographic order with full masks.
pub fn free_sites(shape: &crate::lattice::Shape, size: usize) -> Vec<SweepSite> {
    let m = crate::pattern::full_mask(size);
    shape.iter().map(|s| SweepSite { site: s.clone(), role: Role::Free, mask: m }).collect()
}
