//! Exhaustive TSSM checking over the rhomboid criterion: a shift has TSSM
//! with gap `g` iff for every `S ⊆ R_g \ {0}`, every letter `u` at the
//! origin, every `s` on `S` and every `v` on the ring `R_{g+2} \ R_{g-1}`
//! outside `S`, `[us] ≠ ∅` and `[sv] ≠ ∅` force `[usv] ≠ ∅`.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use itertools::Itertools;
use nnsft_core::admissibility::Cached;
use nnsft_core::lattice::rhomboid;
use nnsft_core::{dist, Distance, Language, Letter, LineExact, Nnsft, Pattern, PeriodicExtension, PeriodicPoint, Site};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::MixingError;

/// Limits for an exhaustive check: admissibility queries and wall time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TssmBudget {
    pub max_checks: u64,
    pub max_seconds: f64,
}

impl TssmBudget {
    pub const UNLIMITED: TssmBudget = TssmBudget { max_checks: u64::MAX, max_seconds: f64::INFINITY };

    pub fn seconds(max_seconds: f64) -> TssmBudget {
        TssmBudget { max_checks: u64::MAX, max_seconds }
    }
}

impl Default for TssmBudget {
    fn default() -> Self {
        TssmBudget::seconds(60.0)
    }
}

/// A counterexample to TSSM with the recorded gap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub u: Pattern,
    pub s: Pattern,
    pub v: Pattern,
    pub gap: u32,
}

impl Violation {
    pub fn distance(&self) -> Distance {
        dist(self.u.shape(), self.v.shape()).unwrap_or(Distance::Infinite)
    }

    /// Re-runs the three admissibility checks and the distance condition.
    pub fn verify(&self, lang: &dyn Language) -> bool {
        let Ok(us) = self.u.union(&self.s) else { return false };
        let Ok(sv) = self.s.union(&self.v) else { return false };
        let Ok(usv) = us.union(&self.v) else { return false };
        !self.u.shape().is_empty()
            && !self.v.shape().is_empty()
            && self.u.shape().is_disjoint(self.s.shape())
            && self.v.shape().is_disjoint(self.s.shape())
            && self.distance().at_least(self.gap as u64)
            && lang.contains(&us)
            && lang.contains(&sv)
            && !lang.contains(&usv)
    }
}

/// How far an interrupted exhaustive check got.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExhaustionReport {
    /// Subsets `S` fully processed, in canonical order.
    pub subsets_done: u64,
    /// `2^{|R_g \ {0}|}`.
    pub subsets_total: f64,
    pub checks: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TssmVerdict {
    Violation(Violation),
    Certified { gap: u32 },
    Exhausted(ExhaustionReport),
}

struct Tracker<'a> {
    lang: &'a dyn Language,
    budget: TssmBudget,
    start: Instant,
    checks: AtomicU64,
    tripped: AtomicBool,
}

struct OutOfBudget;

impl Tracker<'_> {
    fn contains(&self, p: &Pattern) -> Result<bool, OutOfBudget> {
        let n = self.checks.fetch_add(1, Ordering::Relaxed) + 1;
        if self.tripped.load(Ordering::Relaxed)
            || n > self.budget.max_checks
            || (n.is_multiple_of(32) && self.start.elapsed().as_secs_f64() > self.budget.max_seconds)
        {
            self.tripped.store(true, Ordering::Relaxed);
            return Err(OutOfBudget);
        }
        Ok(self.lang.contains(p))
    }
}

enum Outcome {
    Clean,
    Found(Violation),
    Budget,
}

struct Geometry {
    dim: usize,
    letters: Letter,
    /// `R_g \ {0}` in canonical order.
    inner: Vec<Site>,
    /// `R_{g+2} \ R_{g-1}`, closest to the origin first.
    ring: Vec<Site>,
    gap: u32,
}

fn geometry(dim: usize, letters: usize, g: u32) -> Result<Geometry, MixingError> {
    let origin = Site::origin(dim);
    let inner: Vec<Site> = rhomboid(g, dim)?.iter().filter(|s| **s != origin).cloned().collect();
    let mut ring: Vec<Site> = rhomboid(g + 2, dim)?.difference(&rhomboid(g - 1, dim)?)?.sites().to_vec();
    ring.sort_by_key(|s| (s.norm(), s.clone()));
    Ok(Geometry { dim, letters: letters as Letter, inner, ring, gap: g })
}

fn join(a: &Pattern, b: &Pattern) -> Pattern {
    a.union(b).expect("patterns agree on shared sites")
}

fn with(p: &Pattern, site: &Site, a: Letter) -> Pattern {
    join(p, &Pattern::single(site.clone(), a))
}

/// Drops sites of `v`, then of `s`, while `[usv]` stays empty.
fn minimize(lang: &dyn Language, u: &Pattern, s: &Pattern, v: &Pattern, gap: u32) -> Violation {
    let mut s = s.clone();
    let mut v = v.clone();
    let empty_after = |s: &Pattern, v: &Pattern| !lang.contains(&join(&join(u, s), v));
    for site in v.shape().sites().to_vec().into_iter().rev() {
        let smaller = v.without(&nnsft_core::Shape::singleton(site));
        if !smaller.is_empty() && empty_after(&s, &smaller) {
            v = smaller;
        }
    }
    for site in s.shape().sites().to_vec().into_iter().rev() {
        let smaller = s.without(&nnsft_core::Shape::singleton(site));
        if empty_after(&smaller, &v) {
            s = smaller;
        }
    }
    Violation { u: u.clone(), s, v, gap }
}

fn run_subset(t: &Tracker, geo: &Geometry, subset: &[usize]) -> Outcome {
    let sites: Vec<Site> = subset.iter().map(|&i| geo.inner[i].clone()).collect();
    let ring: Vec<Site> = geo.ring.iter().filter(|p| !sites.contains(p)).cloned().collect();
    let origin = Site::origin(geo.dim);
    let empty = Pattern::empty(geo.dim);
    for a in 0..geo.letters {
        let u = Pattern::single(origin.clone(), a);
        match t.contains(&u) {
            Err(OutOfBudget) => return Outcome::Budget,
            Ok(false) => continue,
            Ok(true) => {}
        }
        match walk_s(t, geo, &u, &sites, &ring, &empty) {
            Outcome::Clean => {}
            other => return other,
        }
    }
    Outcome::Clean
}

/// Letters `s` on the chosen subset with `[us] ≠ ∅`, depth first.
fn walk_s(t: &Tracker, geo: &Geometry, u: &Pattern, rest: &[Site], ring: &[Site], s: &Pattern) -> Outcome {
    let Some((site, tail)) = rest.split_first() else {
        return examine(t, geo, u, s, ring);
    };
    for a in 0..geo.letters {
        let s2 = with(s, site, a);
        match t.contains(&join(u, &s2)) {
            Err(OutOfBudget) => return Outcome::Budget,
            Ok(false) => continue,
            Ok(true) => {}
        }
        match walk_s(t, geo, u, tail, ring, &s2) {
            Outcome::Clean => {}
            other => return other,
        }
    }
    Outcome::Clean
}

fn examine(t: &Tracker, geo: &Geometry, u: &Pattern, s: &Pattern, ring: &[Site]) -> Outcome {
    let us = join(u, s);
    // single ring sites first: most violations need nothing more
    for p in ring {
        for b in 0..geo.letters {
            let sv = with(s, p, b);
            let r = t.contains(&sv).and_then(|ok| if ok { t.contains(&with(&us, p, b)).map(|x| !x) } else { Ok(false) });
            match r {
                Err(OutOfBudget) => return Outcome::Budget,
                Ok(true) => return Outcome::Found(minimize(t.lang, u, s, &Pattern::single(p.clone(), b), geo.gap)),
                Ok(false) => {}
            }
        }
    }
    walk_v(t, geo, u, s, ring, &Pattern::empty(geo.dim))
}

/// Ring letterings `v` with `[sv] ≠ ∅`, checking `[usv]` at every node.
fn walk_v(t: &Tracker, geo: &Geometry, u: &Pattern, s: &Pattern, rest: &[Site], v: &Pattern) -> Outcome {
    let Some((site, tail)) = rest.split_first() else { return Outcome::Clean };
    for b in 0..geo.letters {
        let v2 = with(v, site, b);
        let sv = join(s, &v2);
        match t.contains(&sv) {
            Err(OutOfBudget) => return Outcome::Budget,
            Ok(false) => continue,
            Ok(true) => {}
        }
        match t.contains(&join(u, &sv)) {
            Err(OutOfBudget) => return Outcome::Budget,
            Ok(false) => return Outcome::Found(minimize(t.lang, u, s, &v2, geo.gap)),
            Ok(true) => {}
        }
        match walk_v(t, geo, u, s, tail, &v2) {
            Outcome::Clean => {}
            other => return other,
        }
    }
    Outcome::Clean
}

/// Runs the rhomboid criterion for gap `g` against any language decider.
///
/// Subsets `S` go by cardinality, then lexicographically; within a subset the
/// origin letter, then `s`, then ring letterings are walked depth first with
/// ring sites closest to the origin first. Only ring letterings with
/// `[sv] ≠ ∅` are extended, and `[usv]` is tested on every partial
/// lettering, so violations with a partial `v` are reported as soon as they
/// appear and then shrunk greedily. Subsets are processed in parallel
/// batches; the reported violation is always the first in canonical order.
pub fn check_tssm_in(lang: &dyn Language, g: u32, budget: TssmBudget) -> Result<TssmVerdict, MixingError> {
    if g == 0 {
        return Err(MixingError::Invalid("TSSM gap must be positive".into()));
    }
    let geo = geometry(lang.dim(), lang.alphabet_size(), g)?;
    let t = Tracker { lang, budget, start: Instant::now(), checks: AtomicU64::new(0), tripped: AtomicBool::new(false) };
    let n = geo.inner.len();
    let mut subsets = (0..=n).flat_map(|k| (0..n).combinations(k));
    let batch = (rayon::current_num_threads() * 2).max(1);
    let mut done = 0u64;
    loop {
        let chunk: Vec<Vec<usize>> = subsets.by_ref().take(batch).collect();
        if chunk.is_empty() {
            return Ok(TssmVerdict::Certified { gap: g });
        }
        let outcomes: Vec<Outcome> = chunk.par_iter().map(|sub| run_subset(&t, &geo, sub)).collect();
        for o in outcomes {
            match o {
                Outcome::Clean => done += 1,
                Outcome::Found(v) => return Ok(TssmVerdict::Violation(v)),
                Outcome::Budget => {
                    return Ok(TssmVerdict::Exhausted(ExhaustionReport {
                        subsets_done: done,
                        subsets_total: 2f64.powi(n as i32),
                        checks: t.checks.load(Ordering::Relaxed),
                        seconds: t.start.elapsed().as_secs_f64(),
                    }))
                }
            }
        }
    }
}

/// The rhomboid criterion for a nearest-neighbour shift. One-dimensional
/// shifts are decided exactly on the line; otherwise admissibility goes
/// through the band decider with strong-irreducibility gap `si_gap` and the
/// periodic point `z`.
///
/// The band decider is exact for any true strong-irreducibility gap, so
/// `si_gap` may exceed `g`.
pub fn check_tssm(x: &Nnsft, g: u32, si_gap: u32, z: &PeriodicPoint, budget: TssmBudget) -> Result<TssmVerdict, MixingError> {
    if x.dim() == 1 {
        let line = LineExact::new(x.clone())?;
        return check_tssm_in(&line, g, budget);
    }
    let band = PeriodicExtension::new(x.clone(), si_gap, z.clone())?;
    let cached = Cached::new(&band);
    check_tssm_in(&cached, g, budget)
}
