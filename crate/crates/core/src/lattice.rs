//! Geometry of the integer lattice `Z^d` under the ℓ1 metric.
//!
//! Sites carry fixed-width coordinates bounded by [`COORD_LIMIT`]; any
//! operation that would leave that range reports [`LatticeError::Overflow`].
//! Shapes keep their sites sorted in lexicographic order, which is also the
//! order used for the lexicographic past.

use std::cmp::Ordering;
use std::fmt;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::LatticeError;

/// Largest admissible absolute value of a coordinate.
pub const COORD_LIMIT: i64 = 1 << 30;

/// A point of `Z^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site(SmallVec<[i32; 4]>);

impl Site {
    /// Builds a site, rejecting empty coordinate lists and out-of-range values.
    pub fn new(coords: &[i64]) -> Result<Site, LatticeError> {
        if coords.is_empty() {
            return Err(LatticeError::ZeroDimension);
        }
        let mut c = SmallVec::with_capacity(coords.len());
        for &x in coords {
            c.push(checked_coord(x)?);
        }
        Ok(Site(c))
    }

    /// Builds a site from `i32` coordinates already known to be in range.
    pub fn from_i32(coords: &[i32]) -> Result<Site, LatticeError> {
        let wide: Vec<i64> = coords.iter().map(|&x| x as i64).collect();
        Site::new(&wide)
    }

    pub fn origin(dim: usize) -> Site {
        assert!(dim >= 1, "dimension must be positive");
        Site(SmallVec::from_elem(0, dim))
    }

    /// The unit vector along `axis` (0-based) scaled by `sign`.
    pub fn unit(dim: usize, axis: usize, sign: i32) -> Site {
        let mut s = Site::origin(dim);
        s.0[axis] = sign;
        s
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn coord(&self, axis: usize) -> i32 {
        self.0[axis]
    }

    pub fn norm(&self) -> u64 {
        self.0.iter().map(|&x| (x as i64).unsigned_abs()).sum()
    }

    pub fn dist(&self, other: &Site) -> u64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(&a, &b)| (a as i64 - b as i64).unsigned_abs())
            .sum()
    }

    /// Coordinate-wise sum.
    pub fn translate(&self, by: &Site) -> Result<Site, LatticeError> {
        if by.dim() != self.dim() {
            return Err(LatticeError::DimensionMismatch(self.dim(), by.dim()));
        }
        let mut c = SmallVec::with_capacity(self.dim());
        for (&a, &b) in self.0.iter().zip(by.0.iter()) {
            c.push(checked_coord(a as i64 + b as i64)?);
        }
        Ok(Site(c))
    }

    /// Coordinate-wise difference `self - other`.
    pub fn minus(&self, other: &Site) -> Result<Site, LatticeError> {
        self.translate(&other.negate())
    }

    pub fn negate(&self) -> Site {
        Site(self.0.iter().map(|&x| -x).collect())
    }

    /// Moves one step along `axis`; fails only at the coordinate limit.
    pub fn step(&self, axis: usize, sign: i32) -> Result<Site, LatticeError> {
        let mut c = self.0.clone();
        c[axis] = checked_coord(c[axis] as i64 + sign as i64)?;
        Ok(Site(c))
    }

    /// The `2d` lattice neighbours, in the order `+e_1, -e_1, +e_2, -e_2, ...`.
    pub fn neighbours(&self) -> Result<Vec<Site>, LatticeError> {
        let mut out = Vec::with_capacity(2 * self.dim());
        for axis in 0..self.dim() {
            out.push(self.step(axis, 1)?);
            out.push(self.step(axis, -1)?);
        }
        Ok(out)
    }

    /// Strict lexicographic precedence: at the first differing coordinate
    /// `self` is smaller.
    pub fn precedes(&self, other: &Site) -> bool {
        self.cmp(other) == Ordering::Less
    }
}

impl fmt::Debug for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn checked_coord(x: i64) -> Result<i32, LatticeError> {
    if x.abs() > COORD_LIMIT {
        Err(LatticeError::Overflow(x))
    } else {
        Ok(x as i32)
    }
}

/// Set distance between shapes; empty shapes are infinitely far from everything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Distance {
    Finite(u64),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<u64> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    /// `true` when the distance is at least `g` (infinite counts as far).
    pub fn at_least(self, g: u64) -> bool {
        match self {
            Distance::Finite(d) => d >= g,
            Distance::Infinite => true,
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b)) => a.cmp(b),
            (Distance::Finite(_), Distance::Infinite) => Ordering::Less,
            (Distance::Infinite, Distance::Finite(_)) => Ordering::Greater,
            (Distance::Infinite, Distance::Infinite) => Ordering::Equal,
        }
    }
}

/// A finite set of sites of one fixed dimension, stored sorted and deduplicated.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    dim: usize,
    sites: Vec<Site>,
}

impl Shape {
    pub fn empty(dim: usize) -> Shape {
        assert!(dim >= 1, "dimension must be positive");
        Shape { dim, sites: Vec::new() }
    }

    /// Collects sites into a shape; duplicates are merged.
    pub fn from_sites<I: IntoIterator<Item = Site>>(dim: usize, sites: I) -> Result<Shape, LatticeError> {
        if dim == 0 {
            return Err(LatticeError::ZeroDimension);
        }
        let mut v: Vec<Site> = sites.into_iter().collect();
        if let Some(bad) = v.iter().find(|s| s.dim() != dim) {
            return Err(LatticeError::DimensionMismatch(dim, bad.dim()));
        }
        v.sort_unstable();
        v.dedup();
        Ok(Shape { dim, sites: v })
    }

    pub fn singleton(site: Site) -> Shape {
        Shape { dim: site.dim(), sites: vec![site] }
    }

    /// Parses integer coordinate tuples; convenient in tests.
    pub fn from_coords(dim: usize, coords: &[&[i64]]) -> Result<Shape, LatticeError> {
        let sites = coords.iter().map(|c| Site::new(c)).collect::<Result<Vec<_>, _>>()?;
        Shape::from_sites(dim, sites)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Site> {
        self.sites.iter()
    }

    pub fn contains(&self, s: &Site) -> bool {
        self.sites.binary_search(s).is_ok()
    }

    /// Position of a site in the canonical order.
    pub fn index_of(&self, s: &Site) -> Option<usize> {
        self.sites.binary_search(s).ok()
    }

    fn check_dim(&self, other: &Shape) -> Result<(), LatticeError> {
        if self.dim != other.dim {
            Err(LatticeError::DimensionMismatch(self.dim, other.dim))
        } else {
            Ok(())
        }
    }

    pub fn union(&self, other: &Shape) -> Result<Shape, LatticeError> {
        self.check_dim(other)?;
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.sites.len() && j < other.sites.len() {
            match self.sites[i].cmp(&other.sites[j]) {
                Ordering::Less => {
                    v.push(self.sites[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    v.push(other.sites[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    v.push(self.sites[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        v.extend_from_slice(&self.sites[i..]);
        v.extend_from_slice(&other.sites[j..]);
        Ok(Shape { dim: self.dim, sites: v })
    }

    pub fn difference(&self, other: &Shape) -> Result<Shape, LatticeError> {
        self.check_dim(other)?;
        let sites = self.sites.iter().filter(|s| !other.contains(s)).cloned().collect();
        Ok(Shape { dim: self.dim, sites })
    }

    pub fn intersection(&self, other: &Shape) -> Result<Shape, LatticeError> {
        self.check_dim(other)?;
        let sites = self.sites.iter().filter(|s| other.contains(s)).cloned().collect();
        Ok(Shape { dim: self.dim, sites })
    }

    pub fn is_subset(&self, other: &Shape) -> bool {
        self.dim == other.dim && self.sites.iter().all(|s| other.contains(s))
    }

    pub fn is_disjoint(&self, other: &Shape) -> bool {
        self.sites.iter().all(|s| !other.contains(s))
    }

    pub fn translate(&self, by: &Site) -> Result<Shape, LatticeError> {
        let sites = self.sites.iter().map(|s| s.translate(by)).collect::<Result<Vec<_>, _>>()?;
        // translation preserves lexicographic order
        Ok(Shape { dim: self.dim, sites })
    }

    /// `N_n(S)`: all sites within ℓ1 distance `n` of the shape.
    pub fn n_neighbourhood(&self, n: u32) -> Result<Shape, LatticeError> {
        let mut all: FxHashSet<Site> = self.sites.iter().cloned().collect();
        let mut frontier: Vec<Site> = self.sites.clone();
        for _ in 0..n {
            let mut next = Vec::new();
            for s in &frontier {
                for q in s.neighbours()? {
                    if all.insert(q.clone()) {
                        next.push(q);
                    }
                }
            }
            frontier = next;
        }
        Shape::from_sites(self.dim, all)
    }

    /// `∂_n(S) = N_n(S) \ S`.
    pub fn n_boundary(&self, n: u32) -> Result<Shape, LatticeError> {
        self.n_neighbourhood(n)?.difference(self)
    }

    /// The outer boundary `∂S = ∂_1(S)`.
    pub fn boundary(&self) -> Result<Shape, LatticeError> {
        self.n_boundary(1)
    }

    /// Largest pairwise ℓ1 distance; zero for shapes with fewer than two sites.
    pub fn diameter(&self) -> u64 {
        let mut best = 0;
        for (i, a) in self.sites.iter().enumerate() {
            for b in &self.sites[i + 1..] {
                best = best.max(a.dist(b));
            }
        }
        best
    }

    /// Coordinate-wise minimum over the shape.
    pub fn min_corner(&self) -> Option<Site> {
        let first = self.sites.first()?;
        let mut c: SmallVec<[i32; 4]> = first.0.clone();
        for s in &self.sites[1..] {
            for (k, &x) in s.0.iter().enumerate() {
                c[k] = c[k].min(x);
            }
        }
        Some(Site(c))
    }

    /// Sites of `self` adjacent to `s` (excluding `s`).
    pub fn neighbours_in(&self, s: &Site) -> Vec<Site> {
        s.neighbours()
            .map(|ns| ns.into_iter().filter(|q| self.contains(q)).collect())
            .unwrap_or_default()
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.sites.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a Shape {
    type Item = &'a Site;
    type IntoIter = std::slice::Iter<'a, Site>;
    fn into_iter(self) -> Self::IntoIter {
        self.sites.iter()
    }
}

/// ℓ1 set distance; [`Distance::Infinite`] when either shape is empty.
pub fn dist(a: &Shape, b: &Shape) -> Result<Distance, LatticeError> {
    a.check_dim(b)?;
    if a.is_empty() || b.is_empty() {
        return Ok(Distance::Infinite);
    }
    let mut best = u64::MAX;
    for p in a.iter() {
        for q in b.iter() {
            best = best.min(p.dist(q));
            if best == 0 {
                return Ok(Distance::Finite(0));
            }
        }
    }
    Ok(Distance::Finite(best))
}

/// Calls `f` on every integer vector in the box `[-n, n]^d`, lexicographically.
fn for_each_in_box(n: i64, d: usize, mut f: impl FnMut(&[i64])) {
    let mut cur = vec![-n; d];
    loop {
        f(&cur);
        let mut k = d;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if cur[k] < n {
                cur[k] += 1;
                for x in cur.iter_mut().skip(k + 1) {
                    *x = -n;
                }
                break;
            }
        }
    }
}

fn collect_box(n: u32, d: usize, keep: impl Fn(&[i64]) -> bool) -> Result<Shape, LatticeError> {
    if d == 0 {
        return Err(LatticeError::ZeroDimension);
    }
    if n as i64 > COORD_LIMIT {
        return Err(LatticeError::Overflow(n as i64));
    }
    let mut sites = Vec::new();
    let mut err = None;
    for_each_in_box(n as i64, d, |c| {
        if keep(c) {
            match Site::new(c) {
                Ok(s) => sites.push(s),
                Err(e) => err = Some(e),
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    // generated in lexicographic order already
    Ok(Shape { dim: d, sites })
}

/// The block `B_n = [-n, n]^d`.
pub fn block(n: u32, d: usize) -> Result<Shape, LatticeError> {
    collect_box(n, d, |_| true)
}

/// The rhomboid (ℓ1 ball) `R_n`.
pub fn rhomboid(n: u32, d: usize) -> Result<Shape, LatticeError> {
    collect_box(n, d, |c| c.iter().map(|x| x.unsigned_abs()).sum::<u64>() <= n as u64)
}

/// The axis-aligned box `∏ [lo_i, hi_i]`.
pub fn cuboid(lo: &[i64], hi: &[i64]) -> Result<Shape, LatticeError> {
    if lo.len() != hi.len() {
        return Err(LatticeError::DimensionMismatch(lo.len(), hi.len()));
    }
    let d = lo.len();
    let mut sites = Vec::new();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return Shape::from_sites(d, sites);
    }
    let mut cur = lo.to_vec();
    loop {
        sites.push(Site::new(&cur)?);
        let mut k = d;
        loop {
            if k == 0 {
                return Shape::from_sites(d, sites);
            }
            k -= 1;
            if cur[k] < hi[k] {
                cur[k] += 1;
                for j in k + 1..d {
                    cur[j] = lo[j];
                }
                break;
            }
        }
    }
}

fn lex_negative(c: &[i64]) -> bool {
    c.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0)
}

/// `P_n`: the sites of `B_n` strictly preceding the origin lexicographically.
pub fn lex_past(n: u32, d: usize) -> Result<Shape, LatticeError> {
    collect_box(n, d, lex_negative)
}

/// `true` when the site lies in the lexicographic past of the origin.
pub fn in_past(s: &Site) -> bool {
    s.coords().iter().find(|&&x| x != 0).is_some_and(|&x| x < 0)
}

/// The region `W_n` used by the pressure algorithm and the split of its boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfRhomboid {
    /// `R_n` minus the past: the rhomboid sites `p` with `p ≽ 0`.
    pub w: Shape,
    /// Boundary sites lying in the past.
    pub s: Shape,
    /// Boundary sites outside the past.
    pub v: Shape,
}

/// Builds `W_n = R_n \ P_n` with `∂W_n = S_n ⊔ V_n`.
pub fn half_rhomboid(n: u32, d: usize) -> Result<HalfRhomboid, LatticeError> {
    if !(1..=2).contains(&d) {
        return Err(LatticeError::UnsupportedDimension(d));
    }
    if n == 0 {
        return Err(LatticeError::InvalidParameter("half rhomboid needs n >= 1".into()));
    }
    let w = collect_box(n, d, |c| {
        c.iter().map(|x| x.unsigned_abs()).sum::<u64>() <= n as u64 && !lex_negative(c)
    })?;
    let bd = w.boundary()?;
    let (s, v): (Vec<Site>, Vec<Site>) = bd.iter().cloned().partition(in_past);
    Ok(HalfRhomboid { w, s: Shape::from_sites(d, s)?, v: Shape::from_sites(d, v)? })
}
