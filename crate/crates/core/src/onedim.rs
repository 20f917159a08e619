//! One-dimensional machinery: transition matrices, essential letters,
//! entropy, primitivity and higher-block recoding.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::SftError;
use crate::lattice::Site;
use crate::pattern::{full_mask, Alphabet, Letter, Pattern};
use crate::sft::Nnsft;

/// The boolean transition matrix of a one-dimensional n.n. SFT.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness1D {
    /// `rows[a]` has bit `b` set iff `ab` is allowed.
    pub rows: Vec<u64>,
}

impl Witness1D {
    pub fn from_sft(x: &Nnsft) -> Result<Witness1D, SftError> {
        require_1d(x)?;
        Ok(Witness1D { rows: x.relation(0).forward.clone() })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.rows[a] >> b & 1 == 1
    }

    /// Letters lying on a bi-infinite path: iteratively drop letters with no
    /// successor or no predecessor among the survivors.
    pub fn essential_mask(&self) -> u64 {
        let mut alive = full_mask(self.size());
        loop {
            let mut next = alive;
            for a in 0..self.size() {
                if alive >> a & 1 == 0 {
                    continue;
                }
                let has_succ = self.rows[a] & alive != 0;
                let has_pred = (0..self.size()).any(|b| alive >> b & 1 == 1 && self.get(b, a));
                if !has_succ || !has_pred {
                    next &= !(1 << a);
                }
            }
            if next == alive {
                return alive;
            }
            alive = next;
        }
    }

    /// Successors of a letter set inside `mask`.
    pub fn step(&self, from: u64, mask: u64) -> u64 {
        let mut out = 0;
        let mut rest = from;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= self.rows[a];
        }
        out & mask
    }

    fn essential_indices(&self) -> Vec<usize> {
        let m = self.essential_mask();
        (0..self.size()).filter(|&a| m >> a & 1 == 1).collect()
    }

    /// Boolean matrix of the essential part, as `u64` rows over essential indices.
    fn essential_rows(&self) -> Vec<u64> {
        let idx = self.essential_indices();
        idx.iter()
            .map(|&a| {
                let mut r = 0u64;
                for (j, &b) in idx.iter().enumerate() {
                    if self.get(a, b) {
                        r |= 1 << j;
                    }
                }
                r
            })
            .collect()
    }
}

fn require_1d(x: &Nnsft) -> Result<(), SftError> {
    if x.dim() != 1 {
        return Err(SftError::WrongDimension { expected: "1".into(), got: x.dim() });
    }
    Ok(())
}

fn bool_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter()
        .map(|&row| {
            let mut out = 0;
            let mut rest = row;
            while rest != 0 {
                let k = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                out |= b[k];
            }
            out
        })
        .collect()
}

fn spectral_radius_irreducible(m: &[Vec<f64>]) -> f64 {
    // Power iteration on M + I: the shifted Perron root is strictly dominant in
    // modulus for an irreducible non-negative matrix, so iteration converges
    // even when M itself is periodic. Collatz–Wielandt quotients bracket the root.
    let n = m.len();
    let mut x = vec![1.0f64; n];
    let mut lo = 0.0;
    let mut hi = f64::INFINITY;
    for _ in 0..200_000 {
        let mut y = x.clone();
        for i in 0..n {
            for j in 0..n {
                y[i] += m[i][j] * x[j];
            }
        }
        lo = f64::INFINITY;
        hi = 0.0f64;
        for i in 0..n {
            let q = y[i] / x[i];
            lo = lo.min(q);
            hi = hi.max(q);
        }
        let norm = y.iter().cloned().fold(0.0, f64::max);
        x = y.into_iter().map(|v| v / norm).collect();
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi) - 1.0
}

/// `log` of the spectral radius of the essential transition matrix.
pub fn entropy_1d(x: &Nnsft) -> Result<f64, SftError> {
    Ok(spectral_radius_1d(&Witness1D::from_sft(x)?)?.ln())
}

/// Spectral radius of the essential part, taken over strongly connected components.
pub fn spectral_radius_1d(w: &Witness1D) -> Result<f64, SftError> {
    let idx = w.essential_indices();
    if idx.is_empty() {
        return Err(SftError::EmptyShift);
    }
    let mut g = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = idx.iter().map(|&a| g.add_node(a)).collect();
    for (i, &a) in idx.iter().enumerate() {
        for (j, &b) in idx.iter().enumerate() {
            if w.get(a, b) {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut best = 0.0f64;
    for comp in tarjan_scc(&g) {
        let letters: Vec<usize> = comp.iter().map(|&n| g[n]).collect();
        let m: Vec<Vec<f64>> = letters
            .iter()
            .map(|&a| letters.iter().map(|&b| if w.get(a, b) { 1.0 } else { 0.0 }).collect())
            .collect();
        if m.iter().all(|r| r.iter().all(|&v| v == 0.0)) {
            continue;
        }
        best = best.max(spectral_radius_irreducible(&m));
    }
    Ok(best)
}

/// Primitivity of the essential matrix (irreducible and aperiodic).
pub fn is_topologically_mixing_1d(x: &Nnsft) -> Result<bool, SftError> {
    Ok(primitivity_exponent(&Witness1D::from_sft(x)?)?.is_some())
}

/// Smallest `k` with every power `A^m`, `m ≥ k`, strictly positive on the
/// essential part; `None` when that part is not primitive.
///
/// For a mixing n.n. shift this is its strong-irreducibility gap.
pub fn primitivity_exponent(w: &Witness1D) -> Result<Option<u64>, SftError> {
    let rows = w.essential_rows();
    let n = rows.len();
    if n == 0 {
        return Err(SftError::EmptyShift);
    }
    let full = full_mask(n);
    // Wielandt: a primitive n×n matrix has A^k > 0 for k = (n-1)^2 + 1.
    let limit = (n - 1) * (n - 1) + 1;
    let mut p = rows.clone();
    for k in 1..=limit {
        if p.iter().all(|&r| r == full) {
            return Ok(Some(k as u64));
        }
        p = bool_mul(&p, &rows);
    }
    Ok(None)
}

/// Exact membership in the language: the pattern (on a line) extends to a
/// bi-infinite point iff consecutive letters are joined by essential paths of
/// the right length.
pub fn is_globally_admissible_1d(x: &Nnsft, u: &Pattern) -> Result<bool, SftError> {
    require_1d(x)?;
    let w = Witness1D::from_sft(x)?;
    Ok(Line::new(&w).admissible(u))
}

/// Reachability helper over the essential graph.
#[derive(Clone, Debug)]
pub struct Line {
    w: Witness1D,
    ess: u64,
}

impl Line {
    pub fn new(w: &Witness1D) -> Line {
        Line { w: w.clone(), ess: w.essential_mask() }
    }

    pub fn essential(&self) -> u64 {
        self.ess
    }

    /// Admissibility of letter-set constraints at sorted positions.
    pub fn admissible_sets(&self, constraints: &[(i64, u64)]) -> bool {
        self.forward_sets(constraints).is_some()
    }

    fn forward_sets(&self, constraints: &[(i64, u64)]) -> Option<Vec<u64>> {
        if self.ess == 0 {
            return None;
        }
        let Some(&(first, _)) = constraints.first() else { return Some(Vec::new()) };
        let last = constraints.last().unwrap().0;
        let span = (last - first) as usize + 1;
        let mut allowed = vec![self.ess; span];
        for &(p, m) in constraints {
            allowed[(p - first) as usize] &= m;
        }
        let mut reach = Vec::with_capacity(span);
        let mut cur = allowed[0];
        reach.push(cur);
        for a in &allowed[1..] {
            cur = self.w.step(cur, *a);
            reach.push(cur);
            if cur == 0 {
                return None;
            }
        }
        if cur == 0 {
            None
        } else {
            Some(reach)
        }
    }

    pub fn admissible(&self, u: &Pattern) -> bool {
        let c: Vec<(i64, u64)> = u.iter().map(|(s, a)| (s.coord(0) as i64, 1u64 << a)).collect();
        self.admissible_sets(&c)
    }

    /// Letters on `[lo, hi]` of some point extending the constraints.
    pub fn witness(&self, constraints: &[(i64, u64)], lo: i64, hi: i64) -> Option<Vec<(i64, Letter)>> {
        let mut c: Vec<(i64, u64)> = constraints.to_vec();
        let all = full_mask(self.w.size());
        if c.first().is_none_or(|f| f.0 > lo) {
            c.insert(0, (lo, all));
        }
        if c.last().unwrap().0 < hi {
            c.push((hi, all));
        }
        c.sort_by_key(|e| e.0);
        let first = c[0].0;
        let reach = self.forward_sets(&c)?;
        // walk backwards choosing letters consistent with the forward sets
        let span = reach.len();
        let mut letters = vec![0 as Letter; span];
        let mut pick = reach[span - 1].trailing_zeros() as Letter;
        letters[span - 1] = pick;
        for i in (0..span - 1).rev() {
            let cands = reach[i];
            let mut rest = cands;
            let mut chosen = None;
            while rest != 0 {
                let a = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if self.w.get(a, pick as usize) {
                    chosen = Some(a as Letter);
                    break;
                }
            }
            pick = chosen.expect("forward sets guarantee a predecessor");
            letters[i] = pick;
        }
        Some(
            (lo..=hi)
                .map(|p| (p, letters[(p - first) as usize]))
                .collect(),
        )
    }
}

/// Result of recoding a one-dimensional SFT given by forbidden words.
#[derive(Clone, Debug)]
pub struct Recoded {
    pub sft: Nnsft,
    /// The window length `m - 1` used for the new letters.
    pub window: usize,
    /// Set when the recoded shift has no points.
    pub empty: bool,
}

/// Higher-block recoding: letters are words of length `m - 1` and `uv` is
/// allowed when the words overlap and the joint window avoids every
/// forbidden word.
pub fn recode_1d_to_nn(alphabet: &Alphabet, forbidden: &[Vec<Letter>]) -> Result<Recoded, SftError> {
    let m = forbidden.iter().map(|w| w.len()).max().unwrap_or(0);
    if m < 2 {
        return Err(SftError::Invalid("forbidden words must include one of length at least 2".into()));
    }
    let k = alphabet.size();
    let window = m - 1;
    let count = k.checked_pow(window as u32).filter(|&c| c <= crate::pattern::MAX_ALPHABET);
    let Some(count) = count else {
        return Err(SftError::Budget(format!("{k}^{window} recoded letters exceed the alphabet limit")));
    };
    let words: Vec<Vec<Letter>> = (0..count)
        .map(|mut i| {
            let mut w = vec![0 as Letter; window];
            for slot in w.iter_mut().rev() {
                *slot = (i % k) as Letter;
                i /= k;
            }
            w
        })
        .collect();
    let labels: Vec<String> = words
        .iter()
        .map(|w| w.iter().map(|&a| alphabet.label(a)).collect::<Vec<_>>().join(""))
        .collect();
    let new_alpha = match Alphabet::new(labels.clone()) {
        Ok(a) => a,
        // labels may collide for multi-character labels; fall back to separators
        Err(_) => Alphabet::new(words.iter().map(|w| {
            w.iter().map(|&a| alphabet.label(a)).collect::<Vec<_>>().join(".")
        }))?,
    };
    let contains_forbidden = |s: &[Letter]| {
        forbidden
            .iter()
            .any(|f| !f.is_empty() && f.len() <= s.len() && s.windows(f.len()).any(|win| win == f.as_slice()))
    };
    let sft = Nnsft::from_fn(new_alpha, 1, |_, a, b| {
        let (u, v) = (&words[a as usize], &words[b as usize]);
        if u[1..] != v[..window - 1] {
            return false;
        }
        let mut joint = u.clone();
        joint.push(*v.last().unwrap());
        !contains_forbidden(&joint)
    })?;
    let empty = Witness1D::from_sft(&sft)?.essential_mask() == 0;
    Ok(Recoded { sft, window, empty })
}

/// A one-dimensional SFT given by forbidden words, decided through its recoding.
#[derive(Clone, Debug)]
pub struct WindowSft1d {
    pub alphabet: Alphabet,
    pub forbidden: Vec<Vec<Letter>>,
    pub recoded: Recoded,
    line: Line,
}

impl WindowSft1d {
    pub fn new(alphabet: Alphabet, forbidden: Vec<Vec<Letter>>) -> Result<WindowSft1d, SftError> {
        let recoded = recode_1d_to_nn(&alphabet, &forbidden)?;
        let line = Line::new(&Witness1D::from_sft(&recoded.sft)?);
        Ok(WindowSft1d { alphabet, forbidden, recoded, line })
    }

    /// Recoded letters whose first symbol is `a`.
    fn first_symbol_mask(&self, a: Letter) -> u64 {
        let k = self.alphabet.size();
        let per = k.pow(self.recoded.window as u32 - 1);
        let mut m = 0u64;
        for i in 0..self.recoded.sft.alphabet_size() {
            if i / per == a as usize {
                m |= 1 << i;
            }
        }
        m
    }

    /// Exact language membership of a pattern on the line.
    pub fn is_globally_admissible(&self, u: &Pattern) -> bool {
        let c: Vec<(i64, u64)> = u.iter().map(|(s, a)| (s.coord(0) as i64, self.first_symbol_mask(a))).collect();
        self.line.admissible_sets(&c)
    }
}

/// Sites `0..len` on the line.
pub fn line_sites(lo: i64, hi: i64) -> Vec<Site> {
    (lo..=hi).map(|i| Site::new(&[i]).expect("small coordinate")).collect()
}
