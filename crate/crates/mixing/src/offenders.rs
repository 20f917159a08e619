//! First offenders: patterns outside the language all of whose proper
//! sub-patterns are inside it.

use nnsft_core::{Language, Letter, Pattern, Shape, Site};
use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::error::MixingError;

/// Default cap on the number of candidates examined across all levels.
pub const DEFAULT_OFFENDER_LIMIT: usize = 5_000_000;

fn sort_key(p: &Pattern) -> (usize, Vec<Site>, Vec<Letter>) {
    (p.len(), p.shape().sites().to_vec(), p.values().to_vec())
}

/// Sites `q ∉ p` with `diam(p ∪ {q}) ≤ bound`.
fn extension_sites(p: &Pattern, bound: u64) -> Vec<Site> {
    let dim = p.dim();
    let b = bound as i64;
    let lo: Vec<i64> = (0..dim).map(|i| p.shape().iter().map(|s| s.coord(i) as i64).max().unwrap() - b).collect();
    let hi: Vec<i64> = (0..dim).map(|i| p.shape().iter().map(|s| s.coord(i) as i64).min().unwrap() + b).collect();
    let mut out = Vec::new();
    let mut c = lo.clone();
    loop {
        let q = Site::new(&c).expect("small coordinates");
        if !p.shape().contains(&q) && p.shape().iter().all(|s| s.dist(&q) <= bound) {
            out.push(q);
        }
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < hi[i] {
                c[i] += 1;
                break;
            }
            c[i] = lo[i];
        }
    }
}

/// All first offenders whose shape has ℓ1 diameter at most `bound`, up to
/// translation: each is reported with its coordinate-wise minimum corner
/// at the origin, sorted by size and then canonically.
///
/// Levels are built bottom-up. A pattern with `k + 1` sites is examined only
/// when all of its `k`-site sub-patterns are in the language; it is then
/// either an offender or joins the next level.
pub fn enumerate_first_offenders(lang: &dyn Language, bound: u64, limit: usize) -> Result<Vec<Pattern>, MixingError> {
    let dim = lang.dim();
    let k = lang.alphabet_size() as Letter;
    let origin = Site::origin(dim);
    let mut offenders = Vec::new();
    let mut level: FxHashSet<Pattern> = FxHashSet::default();
    for a in 0..k {
        let p = Pattern::single(origin.clone(), a);
        if lang.contains(&p) {
            level.insert(p);
        } else {
            offenders.push(p);
        }
    }
    let mut examined = k as usize;
    while !level.is_empty() {
        let mut candidates: FxHashSet<Pattern> = FxHashSet::default();
        for p in &level {
            for q in extension_sites(p, bound) {
                for a in 0..k {
                    let c = p.union(&Pattern::single(q.clone(), a)).expect("fresh site").normalized();
                    if candidates.contains(&c) {
                        continue;
                    }
                    let closed = c.shape().iter().all(|s| level.contains(&c.without(&Shape::singleton(s.clone())).normalized()));
                    if closed {
                        candidates.insert(c);
                    }
                }
            }
        }
        examined += candidates.len();
        if examined > limit {
            return Err(MixingError::Budget(format!("more than {limit} candidate patterns")));
        }
        let mut list: Vec<Pattern> = candidates.into_iter().collect();
        list.sort_by_cached_key(sort_key);
        let verdicts: Vec<bool> = list.par_iter().map(|c| lang.contains(c)).collect();
        let mut next = FxHashSet::default();
        for (c, ok) in list.into_iter().zip(verdicts) {
            if ok {
                next.insert(c);
            } else {
                offenders.push(c);
            }
        }
        level = next;
    }
    offenders.sort_by_cached_key(sort_key);
    Ok(offenders)
}
