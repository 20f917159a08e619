//! Guided hunt for TSSM violations over structured separating sets.

use std::fmt;
use std::str::FromStr;

use nnsft_core::lattice::rhomboid;
use nnsft_core::{Language, Letter, Pattern, Site};
use serde::{Deserialize, Serialize};

use crate::error::MixingError;
use crate::tssm::Violation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// `u` at the origin and a single `v` at distance `g..=g+2`, no `s`.
    Singletons,
    /// Two rows of alternating letters above and below the axis joining `u`
    /// and `v`. In one dimension this is the comb.
    Stripes,
    /// One row of alternating letters next to that axis.
    Rows,
    /// Every other site of the axis between `u` and `v`.
    Combs,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Singletons, Strategy::Stripes, Strategy::Rows, Strategy::Combs];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Singletons => "singletons",
            Strategy::Stripes => "stripes",
            Strategy::Rows => "rows",
            Strategy::Combs => "combs",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = MixingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| MixingError::Invalid(format!("unknown strategy {s:?}")))
    }
}

fn at(dim: usize, first: i64, second: i64) -> Site {
    let mut c = vec![0i64; dim];
    c[0] = first;
    if dim > 1 {
        c[1] = second;
    }
    Site::new(&c).expect("small coordinates")
}

fn pattern(dim: usize, pairs: Vec<(Site, Letter)>) -> Pattern {
    Pattern::from_pairs(dim, pairs).expect("distinct sites")
}

/// Candidate `(u-site, v-site, s)` layouts produced by one strategy, with
/// the `s` letters drawn from a letter pair.
struct Layout {
    u_site: Site,
    v_site: Site,
    s: Pattern,
}

/// Tries every letter of `u` and `v` on a layout; returns the first triple
/// passing the three checks.
fn try_layout(lang: &dyn Language, layout: &Layout, gap: u32) -> Option<Violation> {
    if !lang.contains(&layout.s) {
        return None;
    }
    let k = lang.alphabet_size() as Letter;
    let vs: Vec<(Pattern, Pattern)> = (0..k)
        .map(|b| Pattern::single(layout.v_site.clone(), b))
        .map(|v| {
            let sv = v.union(&layout.s).expect("disjoint");
            (v, sv)
        })
        .filter(|(_, sv)| lang.contains(sv))
        .collect();
    for a in 0..k {
        let u = Pattern::single(layout.u_site.clone(), a);
        if vs.is_empty() || !lang.contains(&u.union(&layout.s).expect("disjoint")) {
            continue;
        }
        for (v, sv) in &vs {
            if !lang.contains(&u.union(sv).expect("disjoint")) {
                let w = Violation { u: u.clone(), s: layout.s.clone(), v: v.clone(), gap };
                if w.verify(lang) {
                    return Some(w);
                }
            }
        }
    }
    None
}

fn letter_pairs(k: Letter, distinct: bool) -> impl Iterator<Item = (Letter, Letter)> {
    (0..k).flat_map(move |a| (0..k).map(move |b| (a, b))).filter(move |(a, b)| !distinct || a != b)
}

fn singletons(lang: &dyn Language, g: u32) -> Result<Option<Violation>, MixingError> {
    let dim = lang.dim();
    let k = lang.alphabet_size() as Letter;
    let origin = Site::origin(dim);
    let mut ring: Vec<Site> = rhomboid(g + 2, dim)?.difference(&rhomboid(g - 1, dim)?)?.sites().to_vec();
    ring.sort_by_key(|s| (s.norm(), s.clone()));
    for r in g..=g + 2 {
        for a in 0..k {
            let u = Pattern::single(origin.clone(), a);
            if !lang.contains(&u) {
                continue;
            }
            for b in 0..k {
                for p in ring.iter().filter(|p| p.norm() == r as u64) {
                    let v = Pattern::single(p.clone(), b);
                    if lang.contains(&v) && !lang.contains(&u.union(&v).expect("disjoint")) {
                        return Ok(Some(Violation { u, s: Pattern::empty(dim), v, gap: g }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// `s(i, j) = a` when `j = 1` and `i` is even or `j = -1` and `i` is odd,
/// `b` otherwise, on `[-2m, 2m] × {-1, 1}`; `u` and `v` at `(∓2m, 0)`.
fn stripes_2d(dim: usize, m: i64, a: Letter, b: Letter) -> Layout {
    let l = 2 * m;
    let mut pairs = Vec::new();
    for i in -l..=l {
        for j in [-1i64, 1] {
            let first = (j == 1 && i.rem_euclid(2) == 0) || (j == -1 && i.rem_euclid(2) == 1);
            pairs.push((at(dim, i, j), if first { a } else { b }));
        }
    }
    Layout { u_site: at(dim, -l, 0), v_site: at(dim, l, 0), s: pattern(dim, pairs) }
}

/// Single row `[-l, l] × {1}` alternating `a`, `b` by column parity.
fn row(dim: usize, l: i64, a: Letter, b: Letter) -> Layout {
    let pairs = (-l..=l).map(|i| (at(dim, i, 1), if i.rem_euclid(2) == 0 { a } else { b })).collect();
    Layout { u_site: at(dim, -l, 0), v_site: at(dim, l, 0), s: pattern(dim, pairs) }
}

/// `u` at the origin, `v` at `l·e_1` with `l` even, and `s` on the odd
/// sites strictly between, alternating `a`, `b`.
fn comb(dim: usize, l: i64, a: Letter, b: Letter) -> Layout {
    let pairs = (0..l / 2).map(|t| (at(dim, 2 * t + 1, 0), if t % 2 == 0 { a } else { b })).collect();
    Layout { u_site: Site::origin(dim), v_site: at(dim, l, 0), s: pattern(dim, pairs) }
}

fn even_at_least(g: u32) -> i64 {
    let g = g.max(2) as i64;
    g + g % 2
}

fn structured(lang: &dyn Language, g: u32, strategy: Strategy) -> Option<Violation> {
    let dim = lang.dim();
    let k = lang.alphabet_size() as Letter;
    let scan = |mut layouts: Box<dyn Iterator<Item = Layout>>| layouts.find_map(|l| try_layout(lang, &l, g));
    match (strategy, dim) {
        (Strategy::Stripes, 1) | (Strategy::Combs, _) => {
            let l0 = even_at_least(g);
            scan(Box::new([l0, l0 + 2].into_iter().flat_map(|l| letter_pairs(k, false).map(move |(a, b)| comb(dim, l, a, b)))))
        }
        (Strategy::Stripes, _) => {
            let m0 = (g as i64 + 3) / 4;
            let m0 = m0.max(1);
            scan(Box::new([m0, m0 + 1].into_iter().flat_map(|m| letter_pairs(k, true).map(move |(a, b)| stripes_2d(dim, m, a, b)))))
        }
        (Strategy::Rows, 1) => None,
        (Strategy::Rows, _) => {
            let l0 = (g as i64 + 1) / 2;
            scan(Box::new([l0, l0 + 1].into_iter().flat_map(|l| letter_pairs(k, true).map(move |(a, b)| row(dim, l, a, b)))))
        }
        (Strategy::Singletons, _) => unreachable!(),
    }
}

/// Tries the strategies in the given order and returns the first triple
/// that passes `[us] ≠ ∅`, `[sv] ≠ ∅`, `[usv] = ∅` with `u` and `v` at
/// distance at least `g`. `None` means nothing was found, not that the
/// shift has TSSM.
pub fn search_tssm_violation(lang: &dyn Language, g: u32, strategies: &[Strategy]) -> Result<Option<Violation>, MixingError> {
    if g == 0 {
        return Err(MixingError::Invalid("TSSM gap must be positive".into()));
    }
    for &st in strategies {
        let hit = match st {
            Strategy::Singletons => singletons(lang, g)?,
            other => structured(lang, g, other),
        };
        if let Some(w) = hit {
            debug_assert!(w.verify(lang));
            return Ok(Some(w));
        }
    }
    Ok(None)
}
