//! Pivot sequences: walking from one admissible pattern to another by
//! changing letters only near one disagreement site at a time.

use nnsft_core::{Admissibility, Pattern, Shape};

use crate::error::MixingError;

/// A sequence `w = w_1, …, w_{k+1} = w'` of admissible patterns on `W` in
/// which the `i`-th step only changes sites of `Σ(w, w') ∩ N_g(p_i)`.
///
/// At each step `p_i` is the first site where the current pattern still
/// differs from `w'`. The next pattern takes `w'(p_i)` at `p_i`, keeps the
/// current letters on the agreement set and on the remaining disagreements
/// at distance at least `g` from `p_i`, and is completed by the decider.
/// TSSM with gap `g` guarantees the completion exists; if it does not, or if
/// it changes a site it should not, the step fails with
/// [`MixingError::PivotFailed`].
pub fn pivot_sequence(adm: &dyn Admissibility, w: &Pattern, w_prime: &Pattern, g: u32) -> Result<Vec<Pattern>, MixingError> {
    if w.shape() != w_prime.shape() {
        return Err(MixingError::Invalid("w and w' must share their shape".into()));
    }
    if !adm.is_admissible(w) || !adm.is_admissible(w_prime) {
        return Err(MixingError::Invalid("w and w' must both be globally admissible".into()));
    }
    let shape = w.shape();
    let total = w.disagreement(w_prime)?;
    let mut seq = vec![w.clone()];
    let mut cur = w.clone();
    let mut step = 0usize;
    loop {
        let sigma = cur.disagreement(w_prime)?;
        let Some(p) = sigma.sites().first().cloned() else { break };
        step += 1;
        let near = Shape::singleton(p.clone()).n_neighbourhood(g.saturating_sub(1))?;
        let u = w_prime.restrict(&Shape::singleton(p.clone()));
        let s = cur.restrict(&shape.difference(&sigma)?);
        let v = cur.restrict(&sigma.difference(&near)?);
        let fixed = u.union(&s)?.union(&v)?;
        let failed = || MixingError::PivotFailed { step, site: p.to_string() };
        let next = adm.witness(&fixed, shape).ok_or_else(failed)?;
        let changed = cur.disagreement(&next)?;
        let allowed = total.intersection(&Shape::singleton(p.clone()).n_neighbourhood(g)?)?;
        if !changed.is_subset(&allowed) {
            return Err(failed());
        }
        seq.push(next.clone());
        cur = next;
    }
    Ok(seq)
}
