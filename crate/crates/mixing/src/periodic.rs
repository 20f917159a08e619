//! Search for fully periodic points.

use nnsft_core::periodic::cell_shape;
use nnsft_core::solver::{solve_torus, Budget, Search};
use nnsft_core::{Letter, Nnsft, Pattern, PeriodicPoint};

use crate::error::MixingError;

/// The period vector `(2g, …, 2g)`.
pub fn default_periods(g: u32, d: usize) -> Vec<usize> {
    vec![2 * g as usize; d]
}

/// A periodic point with the given periods, or `None` when the torus has no
/// locally admissible fill. Constant points come first, then two-letter
/// checkerboards (which need every period even), then a general torus search.
pub fn find_periodic_point(x: &Nnsft, periods: &[usize], budget: Budget) -> Result<Option<PeriodicPoint>, MixingError> {
    if periods.len() != x.dim() || periods.contains(&0) {
        return Err(MixingError::Invalid("periods must be positive, one per axis".into()));
    }
    let shape = cell_shape(periods)?;
    let k = x.alphabet_size() as Letter;
    let try_cell = |values: Vec<Letter>| -> Option<PeriodicPoint> {
        let cell = Pattern::new(shape.clone(), values).ok()?;
        PeriodicPoint::new(x, periods.to_vec(), cell).ok()
    };
    for a in 0..k {
        if let Some(z) = try_cell(vec![a; shape.len()]) {
            return Ok(Some(z));
        }
    }
    if periods.iter().all(|p| p % 2 == 0) {
        for a in 0..k {
            for b in (0..k).filter(|&b| b != a) {
                let values = shape
                    .iter()
                    .map(|s| if s.coords().iter().map(|&c| c as i64).sum::<i64>() % 2 == 0 { a } else { b })
                    .collect();
                if let Some(z) = try_cell(values) {
                    return Ok(Some(z));
                }
            }
        }
    }
    match solve_torus(x, periods, budget)? {
        Search::Done(Some(values)) => Ok(try_cell(values)),
        Search::Done(None) => Ok(None),
        Search::OutOfBudget { nodes } => Err(MixingError::Budget(format!("torus search stopped after {nodes} nodes"))),
    }
}
