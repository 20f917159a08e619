//! Global admissibility: does a finite pattern extend to a point of the shift?
//!
//! Three deciders share the [`Admissibility`] trait. [`PeriodicExtension`]
//! is the general one for strongly irreducible shifts: it pins a periodic
//! point on the outer boundary of the `g`-neighbourhood of the pattern and
//! asks the solver to fill the band in between. [`LineExact`] is exact for
//! one-dimensional shifts. [`LocalSuffices`] is valid only for shifts with
//! single-site fillability, where local and global admissibility coincide.

use std::sync::Mutex;

use rustc_hash::FxHashMap;

use crate::error::SftError;
use crate::lattice::{Shape, Site};
use crate::onedim::{Line, WindowSft1d, Witness1D};
use crate::pattern::{full_mask, Pattern};
use crate::periodic::PeriodicPoint;
use crate::sft::Nnsft;
use crate::solver::{extend_with, Budget, Search, ValueOrder};

/// A decision procedure for membership in the language `L(X)`.
pub trait Admissibility: Send + Sync {
    fn sft(&self) -> &Nnsft;

    /// True iff `u` extends to a point of `X`.
    fn is_admissible(&self, u: &Pattern) -> bool;

    /// Letters on `want` of some point agreeing with `u`, if one exists.
    /// Sites of `want` inside `u` keep their letters from `u`.
    fn witness(&self, u: &Pattern, want: &Shape) -> Option<Pattern>;

    /// Human-readable statement of what the answer relies on.
    fn assumption(&self) -> String;
}

/// Bare membership in a language of patterns. Every [`Admissibility`]
/// decider is one; so is a one-dimensional window SFT, whose letters are not
/// those of an n.n. presentation.
pub trait Language: Send + Sync {
    fn dim(&self) -> usize;
    fn alphabet_size(&self) -> usize;
    fn contains(&self, u: &Pattern) -> bool;
}

impl<T: Admissibility + ?Sized> Language for T {
    fn dim(&self) -> usize {
        self.sft().dim()
    }
    fn alphabet_size(&self) -> usize {
        self.sft().alphabet_size()
    }
    fn contains(&self, u: &Pattern) -> bool {
        self.is_admissible(u)
    }
}

impl Language for WindowSft1d {
    fn dim(&self) -> usize {
        1
    }
    fn alphabet_size(&self) -> usize {
        self.alphabet.size()
    }
    fn contains(&self, u: &Pattern) -> bool {
        self.is_globally_admissible(u)
    }
}

/// The neighbourhood-band decider for a shift that is strongly irreducible
/// with gap `g`, using the periodic point `z` outside the band.
#[derive(Debug)]
pub struct PeriodicExtension {
    sft: Nnsft,
    gap: u32,
    z: PeriodicPoint,
    budget: Budget,
}

impl PeriodicExtension {
    pub fn new(sft: Nnsft, gap: u32, z: PeriodicPoint) -> Result<PeriodicExtension, SftError> {
        if gap == 0 {
            return Err(SftError::NonPositiveGap);
        }
        z.validate(&sft)?;
        Ok(PeriodicExtension { sft, gap, z, budget: Budget::UNLIMITED })
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn gap(&self) -> u32 {
        self.gap
    }

    pub fn periodic_point(&self) -> &PeriodicPoint {
        &self.z
    }

    /// Solves the band problem; `Ok(None)` means no extension exists.
    fn band_fill(&self, u: &Pattern) -> Result<Option<Pattern>, SftError> {
        if !self.sft.is_locally_admissible(u) {
            return Ok(None);
        }
        if u.is_empty() {
            return Ok(Some(Pattern::empty(self.sft.dim())));
        }
        let hull = u.shape().n_neighbourhood(self.gap)?;
        let ring = hull.n_boundary(1)?;
        let region = hull.difference(u.shape())?;
        let fixed = u.union(&self.z.restrict(&ring))?;
        match extend_with(&self.sft, &fixed, &region, ValueOrder::Ascending, self.budget)? {
            Search::Done(Some(fill)) => Ok(Some(fill.union(&fixed)?)),
            Search::Done(None) => Ok(None),
            Search::OutOfBudget { nodes } => Err(SftError::Budget(format!("band solver stopped after {nodes} nodes"))),
        }
    }
}

impl Admissibility for PeriodicExtension {
    fn sft(&self) -> &Nnsft {
        &self.sft
    }

    fn is_admissible(&self, u: &Pattern) -> bool {
        self.band_fill(u).expect("band solver budget").is_some()
    }

    fn witness(&self, u: &Pattern, want: &Shape) -> Option<Pattern> {
        let full = self.band_fill(u).expect("band solver budget")?;
        let values = want
            .iter()
            .map(|s| full.get(s).unwrap_or_else(|| self.z.letter_at(s)))
            .collect();
        Some(Pattern::new(want.clone(), values).expect("one letter per site"))
    }

    fn assumption(&self) -> String {
        format!("strong irreducibility with gap {} (band decider)", self.gap)
    }
}

/// Exact decider for one-dimensional shifts.
#[derive(Debug, Clone)]
pub struct LineExact {
    sft: Nnsft,
    line: Line,
}

impl LineExact {
    pub fn new(sft: Nnsft) -> Result<LineExact, SftError> {
        let line = Line::new(&Witness1D::from_sft(&sft)?);
        Ok(LineExact { sft, line })
    }
}

impl Admissibility for LineExact {
    fn sft(&self) -> &Nnsft {
        &self.sft
    }

    fn is_admissible(&self, u: &Pattern) -> bool {
        self.line.admissible(u)
    }

    fn witness(&self, u: &Pattern, want: &Shape) -> Option<Pattern> {
        if !self.line.admissible(u) {
            return None;
        }
        if want.is_empty() {
            return Some(Pattern::empty(1));
        }
        let c: Vec<(i64, u64)> = u.iter().map(|(s, a)| (s.coord(0) as i64, 1u64 << a)).collect();
        let lo = want.sites()[0].coord(0) as i64;
        let hi = want.sites()[want.len() - 1].coord(0) as i64;
        let lo = c.first().map_or(lo, |f| f.0.min(lo));
        let hi = c.last().map_or(hi, |l| l.0.max(hi));
        let line = self.line.witness(&c, lo, hi)?;
        let values = want.iter().map(|s| line[(s.coord(0) as i64 - lo) as usize].1).collect();
        Some(Pattern::new(want.clone(), values).expect("one letter per site"))
    }

    fn assumption(&self) -> String {
        "exact one-dimensional reachability".into()
    }
}

/// Local admissibility standing in for global; sound only under single-site fillability.
#[derive(Debug, Clone)]
pub struct LocalSuffices {
    sft: Nnsft,
}

impl LocalSuffices {
    /// The caller vouches that the shift is single-site fillable.
    pub fn assume_ssf(sft: Nnsft) -> LocalSuffices {
        LocalSuffices { sft }
    }
}

impl Admissibility for LocalSuffices {
    fn sft(&self) -> &Nnsft {
        &self.sft
    }

    fn is_admissible(&self, u: &Pattern) -> bool {
        self.sft.is_locally_admissible(u)
    }

    fn witness(&self, u: &Pattern, want: &Shape) -> Option<Pattern> {
        if !self.sft.is_locally_admissible(u) {
            return None;
        }
        let region = want.difference(u.shape()).ok()?;
        let fill = extend_with(&self.sft, u, &region, ValueOrder::Ascending, Budget::UNLIMITED)
            .ok()?
            .done()
            .flatten()?;
        let all = fill.union(u).ok()?;
        Some(all.restrict(want))
    }

    fn assumption(&self) -> String {
        "single-site fillability (local admissibility suffices)".into()
    }
}

/// Memoizes another decider, keyed by the pattern itself.
pub struct Cached<'a> {
    inner: &'a dyn Admissibility,
    memo: Mutex<FxHashMap<Pattern, bool>>,
}

impl<'a> Cached<'a> {
    pub fn new(inner: &'a dyn Admissibility) -> Cached<'a> {
        Cached { inner, memo: Mutex::new(FxHashMap::default()) }
    }
}

impl Admissibility for Cached<'_> {
    fn sft(&self) -> &Nnsft {
        self.inner.sft()
    }

    fn is_admissible(&self, u: &Pattern) -> bool {
        if let Some(&v) = self.memo.lock().unwrap().get(u) {
            return v;
        }
        let v = self.inner.is_admissible(u);
        self.memo.lock().unwrap().insert(u.clone(), v);
        v
    }

    fn witness(&self, u: &Pattern, want: &Shape) -> Option<Pattern> {
        self.inner.witness(u, want)
    }

    fn assumption(&self) -> String {
        self.inner.assumption()
    }
}

/// Free-function form of the band decider.
pub fn is_globally_admissible(x: &Nnsft, u: &Pattern, si_gap: u32, z: &PeriodicPoint) -> Result<bool, SftError> {
    let d = PeriodicExtension::new(x.clone(), si_gap, z.clone())?;
    Ok(d.band_fill(u)?.is_some())
}

/// A random locally admissible fill drawn by a shuffled solver run.
pub fn random_fill(x: &Nnsft, fixed: &Pattern, region: &Shape, seed: u64) -> Result<Option<Pattern>, SftError> {
    Ok(extend_with(x, fixed, region, ValueOrder::Shuffled(seed), Budget::UNLIMITED)?.done().flatten())
}

/// A pattern drawn from the language on `shape`: a shuffled band fill of a
/// larger neighbourhood, restricted. `margin` controls how far the random
/// fill reaches beyond the shape before the periodic boundary.
pub fn random_admissible(
    x: &Nnsft,
    shape: &Shape,
    z: &PeriodicPoint,
    margin: u32,
    seed: u64,
) -> Result<Option<Pattern>, SftError> {
    let hull = shape.n_neighbourhood(margin)?;
    let ring = hull.n_boundary(1)?;
    let fixed = z.restrict(&ring);
    Ok(random_fill(x, &fixed, &hull, seed)?.map(|p| p.restrict(shape)))
}

/// Letters `a` that are allowed at `site` next to everything in `context`.
pub fn letter_mask_at(x: &Nnsft, site: &Site, context: &Pattern) -> u64 {
    x.candidates_at(site, context) & full_mask(x.alphabet_size())
}
