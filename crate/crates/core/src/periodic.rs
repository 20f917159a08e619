//! Fully periodic points given by a fundamental cell.

use serde::{Deserialize, Serialize};

use crate::error::SftError;
use crate::lattice::{cuboid, Shape, Site};
use crate::pattern::{Letter, Pattern};
use crate::sft::Nnsft;

/// A point of `A^{Z^d}` invariant under translation by `period_i · e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodicPoint {
    periods: Vec<usize>,
    cell: Pattern,
}

impl PeriodicPoint {
    /// Wraps a pattern on `∏ [0, period_i)`; checks every torus edge.
    pub fn new(x: &Nnsft, periods: Vec<usize>, cell: Pattern) -> Result<PeriodicPoint, SftError> {
        let p = PeriodicPoint::unchecked(periods, cell)?;
        p.validate(x)?;
        Ok(p)
    }

    /// Wraps without checking admissibility against a shift.
    pub fn unchecked(periods: Vec<usize>, cell: Pattern) -> Result<PeriodicPoint, SftError> {
        if periods.is_empty() || periods.contains(&0) {
            return Err(SftError::InvalidPeriodicPoint("periods must be positive".into()));
        }
        if cell.shape() != &cell_shape(&periods)? {
            return Err(SftError::InvalidPeriodicPoint("cell must cover the fundamental domain".into()));
        }
        Ok(PeriodicPoint { periods, cell })
    }

    /// The constant point with letter `a`.
    pub fn constant(x: &Nnsft, a: Letter) -> Result<PeriodicPoint, SftError> {
        let periods = vec![1; x.dim()];
        let cell = Pattern::constant(cell_shape(&periods)?, a);
        PeriodicPoint::new(x, periods, cell)
    }

    /// Checks letters and every torus edge.
    pub fn validate(&self, x: &Nnsft) -> Result<(), SftError> {
        if self.periods.len() != x.dim() {
            return Err(SftError::InvalidPeriodicPoint("period count differs from dimension".into()));
        }
        for (s, a) in self.cell.iter() {
            if a as usize >= x.alphabet_size() {
                return Err(SftError::InvalidPeriodicPoint(format!("letter {a} out of range")));
            }
            for axis in 0..x.dim() {
                let b = self.letter_at(&s.step(axis, 1)?);
                if !x.allows(axis, a, b) {
                    return Err(SftError::InvalidPeriodicPoint(format!("forbidden pair across axis {} at {s}", axis + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn periods(&self) -> &[usize] {
        &self.periods
    }

    pub fn cell(&self) -> &Pattern {
        &self.cell
    }

    pub fn dim(&self) -> usize {
        self.periods.len()
    }

    pub fn letter_at(&self, s: &Site) -> Letter {
        let mut idx = 0usize;
        for (k, &c) in s.coords().iter().enumerate() {
            let r = (c as i64).rem_euclid(self.periods[k] as i64) as usize;
            idx = idx * self.periods[k] + r;
        }
        self.cell.values()[idx]
    }

    /// The restriction of the point to a finite shape.
    pub fn restrict(&self, shape: &Shape) -> Pattern {
        let values = shape.iter().map(|s| self.letter_at(s)).collect();
        Pattern::new(shape.clone(), values).expect("one letter per site")
    }

    /// The translate `σ_p(z)`, i.e. the point `q ↦ z(q + p)`.
    pub fn shifted(&self, p: &Site) -> PeriodicPoint {
        let shape = self.cell.shape().clone();
        let values = shape
            .iter()
            .map(|q| self.letter_at(&q.translate(p).expect("cell sites are small")))
            .collect();
        PeriodicPoint { periods: self.periods.clone(), cell: Pattern::new(shape, values).expect("same shape") }
    }

    /// Number of sites in the fundamental cell.
    pub fn cell_size(&self) -> usize {
        self.cell.len()
    }
}

/// The fundamental domain `∏ [0, period_i)`.
pub fn cell_shape(periods: &[usize]) -> Result<Shape, SftError> {
    let lo = vec![0i64; periods.len()];
    let hi: Vec<i64> = periods.iter().map(|&p| p as i64 - 1).collect();
    Ok(cuboid(&lo, &hi)?)
}
