//! Nearest-neighbour shifts of finite type.

use serde::{Deserialize, Serialize};

use crate::error::SftError;
use crate::lattice::{Shape, Site};
use crate::pattern::{Alphabet, Letter, Pattern};

/// Allowed ordered pairs along one axis, stored as bit rows in both directions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AxisRelation {
    /// `forward[a]` holds every `b` that may sit at `p + e_i` when `a` sits at `p`.
    pub forward: Vec<u64>,
    /// `backward[b]` holds every `a` that may sit at `p` when `b` sits at `p + e_i`.
    pub backward: Vec<u64>,
}

impl AxisRelation {
    fn from_fn(size: usize, f: impl Fn(Letter, Letter) -> bool) -> AxisRelation {
        let mut forward = vec![0u64; size];
        let mut backward = vec![0u64; size];
        for a in 0..size {
            for b in 0..size {
                if f(a as Letter, b as Letter) {
                    forward[a] |= 1 << b;
                    backward[b] |= 1 << a;
                }
            }
        }
        AxisRelation { forward, backward }
    }

    pub fn allows(&self, a: Letter, b: Letter) -> bool {
        self.forward[a as usize] >> b & 1 == 1
    }
}

/// A nearest-neighbour SFT on `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Nnsft {
    alphabet: Alphabet,
    dim: usize,
    axes: Vec<AxisRelation>,
}

impl Nnsft {
    /// Builds from a predicate `allowed(axis, a, b)` with 0-based axes.
    pub fn from_fn(alphabet: Alphabet, dim: usize, allowed: impl Fn(usize, Letter, Letter) -> bool) -> Result<Nnsft, SftError> {
        if dim == 0 {
            return Err(crate::error::LatticeError::ZeroDimension.into());
        }
        let size = alphabet.size();
        let axes = (0..dim).map(|i| AxisRelation::from_fn(size, |a, b| allowed(i, a, b))).collect();
        Ok(Nnsft { alphabet, dim, axes })
    }

    /// Builds from explicit allowed pairs per axis.
    pub fn from_allowed(alphabet: Alphabet, dim: usize, allowed: &[Vec<(Letter, Letter)>]) -> Result<Nnsft, SftError> {
        Self::from_pairs(alphabet, dim, allowed, true)
    }

    /// Builds from forbidden pairs per axis; every other pair is allowed.
    pub fn from_forbidden(alphabet: Alphabet, dim: usize, forbidden: &[Vec<(Letter, Letter)>]) -> Result<Nnsft, SftError> {
        Self::from_pairs(alphabet, dim, forbidden, false)
    }

    fn from_pairs(alphabet: Alphabet, dim: usize, pairs: &[Vec<(Letter, Letter)>], listed_allowed: bool) -> Result<Nnsft, SftError> {
        if pairs.len() != dim {
            return Err(SftError::AxisCount { expected: dim, got: pairs.len() });
        }
        let size = alphabet.size();
        for axis in pairs {
            for &(a, b) in axis {
                if a as usize >= size || b as usize >= size {
                    return Err(SftError::LetterOutOfRange(a.max(b) as usize));
                }
            }
        }
        Nnsft::from_fn(alphabet, dim, |i, a, b| pairs[i].contains(&(a, b)) == listed_allowed)
    }

    /// The full shift on `size` numbered letters.
    pub fn full_shift(size: usize, dim: usize) -> Result<Nnsft, SftError> {
        Nnsft::from_fn(Alphabet::numbered(size)?, dim, |_, _, _| true)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.size()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn relation(&self, axis: usize) -> &AxisRelation {
        &self.axes[axis]
    }

    /// Whether `a` at `p` and `b` at `p + e_axis` may coexist (0-based axis).
    pub fn allows(&self, axis: usize, a: Letter, b: Letter) -> bool {
        self.axes[axis].allows(a, b)
    }

    /// Letters compatible with `a` placed at the neighbour `p + sign·e_axis` of `p`.
    pub fn compatible_with_neighbour(&self, axis: usize, sign: i32, a: Letter) -> u64 {
        if sign > 0 {
            // a sits at p + e_i, candidates at p
            self.axes[axis].backward[a as usize]
        } else {
            self.axes[axis].forward[a as usize]
        }
    }

    fn letters_ok(&self, p: &Pattern) -> bool {
        p.values().iter().all(|&a| (a as usize) < self.alphabet.size()) && p.dim() == self.dim
    }

    /// Every lattice edge inside the shape carries an allowed pair.
    pub fn is_locally_admissible(&self, p: &Pattern) -> bool {
        if !self.letters_ok(p) {
            return false;
        }
        let shape = p.shape();
        for (i, (s, a)) in p.iter().enumerate() {
            for axis in 0..self.dim {
                let Ok(q) = s.step(axis, 1) else { continue };
                // the forward neighbour, if present, sits later in lexicographic order
                if let Ok(j) = shape.sites()[i + 1..].binary_search(&q) {
                    let b = p.values()[i + 1 + j];
                    if !self.allows(axis, a, b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Local admissibility of the union of two disjoint patterns.
    pub fn is_locally_admissible_union(&self, a: &Pattern, b: &Pattern) -> bool {
        match a.union(b) {
            Ok(u) => self.is_locally_admissible(&u),
            Err(_) => false,
        }
    }

    /// Letters that `site` may carry given already placed neighbours in `context`.
    pub fn candidates_at(&self, site: &Site, context: &Pattern) -> u64 {
        let mut mask = self.alphabet.full_mask();
        for axis in 0..self.dim {
            for sign in [1, -1] {
                if let Ok(q) = site.step(axis, sign) {
                    if let Some(b) = context.get(&q) {
                        mask &= self.compatible_with_neighbour(axis, sign, b);
                    }
                }
            }
        }
        mask
    }

    /// The union shape of fixed and region must be of this shift's dimension.
    pub(crate) fn check_dim(&self, s: &Shape) -> Result<(), SftError> {
        if s.dim() != self.dim {
            return Err(crate::error::LatticeError::DimensionMismatch(self.dim, s.dim()).into());
        }
        Ok(())
    }
}
