//! Maximal configurations of the Lipschitz height shift `X_g^d`.
//!
//! Heights in `{0..g}` with neighbours differing by at most one. Given a
//! boundary `δ` on `∂W`, the coordinate-wise largest admissible fill is the
//! largest 1-Lipschitz extension
//! `θ(p) = min(g, min_{q ∈ ∂W} δ(q) + d_W(p, q))`, where `d_W` is the length
//! of the shortest lattice path from `p` to `q` whose interior stays in `W`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::ControlFlow;

use nnsft_core::solver::{extend_locally_admissible, for_each_extension};
use nnsft_core::{Letter, Nnsft, Pattern, Shape};
use nnsft_gibbs::{Interaction, Model};

use crate::error::SsmError;

/// The shift `X_g^d`.
pub fn lipschitz_sft(g: u32, d: usize) -> Result<Nnsft, SsmError> {
    let phi = Model::Lipschitz { g: g as usize, lambda: 1.0, d }.build()?;
    Ok(phi.underlying_sft().clone())
}

fn check_inputs(g: u32, region: &Shape, boundary: &Pattern) -> Result<(), SsmError> {
    if boundary.shape() != &region.boundary()? {
        return Err(SsmError::Invalid("the boundary pattern must cover exactly ∂W".into()));
    }
    if boundary.values().iter().any(|&a| a as u32 > g) {
        return Err(SsmError::Invalid(format!("boundary heights must lie in 0..={g}")));
    }
    if !lipschitz_sft(g, region.dim())?.is_locally_admissible(boundary) {
        return Err(SsmError::Invalid("the boundary is not 1-Lipschitz along its own edges".into()));
    }
    Ok(())
}

/// Multi-source shortest paths into `region` from every boundary site,
/// sources starting at their own height.
fn lipschitz_envelope(g: u32, region: &Shape, boundary: &Pattern) -> Result<Vec<u32>, SsmError> {
    let mut best = vec![g; region.len()];
    let mut heap: BinaryHeap<Reverse<(u32, usize)>> = BinaryHeap::new();
    for (q, a) in boundary.iter() {
        for p in q.neighbours()? {
            if let Some(i) = region.index_of(&p) {
                let h = a as u32 + 1;
                if h < best[i] {
                    best[i] = h;
                    heap.push(Reverse((h, i)));
                }
            }
        }
    }
    while let Some(Reverse((h, i))) = heap.pop() {
        if h > best[i] {
            continue;
        }
        for p in region.sites()[i].neighbours()? {
            if let Some(j) = region.index_of(&p) {
                if h + 1 < best[j] {
                    best[j] = h + 1;
                    heap.push(Reverse((h + 1, j)));
                }
            }
        }
    }
    Ok(best)
}

/// Coordinate-wise maximum over all admissible fills, one solver query per
/// site and height. Slow but assumption-free.
pub fn max_config_oracle(g: u32, region: &Shape, boundary: &Pattern) -> Result<Pattern, SsmError> {
    check_inputs(g, region, boundary)?;
    let x = lipschitz_sft(g, region.dim())?;
    let mut values = Vec::with_capacity(region.len());
    for p in region.iter() {
        let rest = region.difference(&Shape::singleton(p.clone()))?;
        let top = (0..=g as Letter).rev().find(|&a| {
            let fixed = boundary.union(&Pattern::single(p.clone(), a)).expect("p lies inside W");
            matches!(extend_locally_admissible(&x, &fixed, &rest), Ok(Some(_)))
        });
        values.push(top.ok_or(SsmError::NotExtendable)?);
    }
    Ok(Pattern::new(region.clone(), values)?)
}

/// The maximal configuration `θ_δ` on `region` for `boundary` on `∂region`.
///
/// Computed in closed form and checked for local admissibility against the
/// boundary. A failed check means no fill exists; the solver confirms this
/// before the error is returned, and if it disagrees the solver's answer is
/// returned with a warning.
pub fn max_config_xg(g: u32, region: &Shape, boundary: &Pattern) -> Result<Pattern, SsmError> {
    check_inputs(g, region, boundary)?;
    let x = lipschitz_sft(g, region.dim())?;
    let heights = lipschitz_envelope(g, region, boundary)?;
    let theta = Pattern::new(region.clone(), heights.into_iter().map(|h| h as Letter).collect())?;
    if x.is_locally_admissible(&theta.union(boundary)?) {
        return Ok(theta);
    }
    if extend_locally_admissible(&x, boundary, region)?.is_none() {
        return Err(SsmError::NotExtendable);
    }
    log::warn!("closed-form maximal configuration failed on an extendable boundary; using the solver");
    max_config_oracle(g, region, boundary)
}

/// Exact `μ^δ(#{q ∈ U : w(q) < θ_δ(q)} ≥ k)` for the Lipschitz interaction
/// `phi` by enumerating every fill of `region`.
pub fn below_max_probability(phi: &Interaction, g: u32, region: &Shape, boundary: &Pattern, u: &Shape, k: usize) -> Result<f64, SsmError> {
    if !u.is_subset(region) {
        return Err(SsmError::Invalid("U must lie inside W".into()));
    }
    let theta = max_config_xg(g, region, boundary)?;
    let mut weights: Vec<(f64, usize)> = Vec::new();
    for_each_extension(phi.underlying_sft(), boundary, region, |w| {
        if let Some(e) = phi.energy_with_boundary(w, boundary).finite() {
            let below = u.iter().filter(|q| w.get(q) < theta.get(q)).count();
            weights.push((-e, below));
        }
        ControlFlow::Continue(())
    })?;
    let top = weights.iter().map(|w| w.0).fold(f64::NEG_INFINITY, f64::max);
    let (mut hit, mut total) = (0.0, 0.0);
    for (lw, below) in weights {
        let v = (lw - top).exp();
        total += v;
        if below >= k {
            hit += v;
        }
    }
    Ok(hit / total)
}

/// `(g+1)^{|U| |N_g(0)|} λ^{-k}`.
pub fn below_max_bound(g: u32, d: usize, u_len: usize, lambda: f64, k: usize) -> f64 {
    let ball = crate::rate::ball_size(g, d as u32) as f64;
    ((u_len as f64) * ball * ((g + 1) as f64).ln() - k as f64 * lambda.ln()).exp()
}
