//! Partition functions and conditional probabilities of the Gibbs
//! specification, by exhaustive enumeration and by frontier sweeps.

use std::ops::ControlFlow;

use nnsft_core::solver::{Budget, LatticeProblem, ValueOrder};
use nnsft_core::sweep::{sweep, LogSum, Role, SweepLimits, SweepSite};
use nnsft_core::{Letter, Pattern, Shape, SftError};

use crate::error::GibbsError;
use crate::interaction::{Energy, Interaction};

/// Largest region handled by exhaustive enumeration.
pub const EXACT_SITE_LIMIT: usize = 24;
/// Default cap on the number of region sites in one column of a sweep.
pub const DEFAULT_MAX_COLUMN: usize = 14;

/// A partition function in log form. `zero` is set exactly when no fill has
/// finite energy, in which case `log` is `-∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogZ {
    pub log: f64,
    pub zero: bool,
}

impl LogZ {
    fn from_log(log: f64) -> LogZ {
        LogZ { log, zero: log == f64::NEG_INFINITY }
    }

    pub fn value(&self) -> f64 {
        if self.zero {
            0.0
        } else {
            self.log.exp()
        }
    }
}

/// A conditional probability query `Λ^δ_S(u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecQuery {
    pub region: Shape,
    pub boundary: Pattern,
    pub target: Pattern,
}

impl SpecQuery {
    pub fn new(region: Shape, boundary: Pattern, target: Pattern) -> Result<SpecQuery, GibbsError> {
        if boundary.shape() != &region.boundary()? {
            return Err(GibbsError::BoundaryShape);
        }
        if !target.shape().is_subset(&region) {
            return Err(GibbsError::TargetOutsideRegion);
        }
        Ok(SpecQuery { region, boundary, target })
    }
}

/// Running `log Σ exp(v_i)` with a moving reference point. The scaled sum
/// carries a Neumaier compensation term: regions near the exhaustive limit
/// add up hundreds of thousands of weights.
#[derive(Clone, Copy, Debug)]
struct LogAccumulator {
    max: f64,
    scaled: f64,
    carry: f64,
}

impl LogAccumulator {
    fn new() -> Self {
        LogAccumulator { max: f64::NEG_INFINITY, scaled: 0.0, carry: 0.0 }
    }

    fn add(&mut self, v: f64) {
        if v == f64::NEG_INFINITY {
            return;
        }
        if v > self.max {
            let r = (self.max - v).exp();
            self.scaled *= r;
            self.carry *= r;
            self.max = v;
            self.push(1.0);
        } else {
            self.push((v - self.max).exp());
        }
    }

    fn push(&mut self, x: f64) {
        let t = self.scaled + x;
        if self.scaled.abs() >= x.abs() {
            self.carry += (self.scaled - t) + x;
        } else {
            self.carry += (x - t) + self.scaled;
        }
        self.scaled = t;
    }

    fn log(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + (self.scaled + self.carry).ln()
        }
    }
}

/// Enumerates every fill of `region` with finite energy next to `boundary`,
/// passing the letters (in region order) and `-energy` to `f`.
fn for_each_weighted_fill(
    phi: &Interaction,
    region: &Shape,
    boundary: &Pattern,
    mut f: impl FnMut(&[Letter], f64),
) -> Result<(), GibbsError> {
    if region.len() > EXACT_SITE_LIMIT {
        return Err(GibbsError::RegionTooLarge(region.len()));
    }
    // Only boundary sites next to the region matter; edges among them are
    // outside the energy and must not veto a fill.
    let near = boundary.restrict(&region.boundary()?);
    let prob = LatticeProblem::build(phi.underlying_sft(), &near, region)?;
    // Vertex terms and edges to the boundary fold into one weight per site
    // and letter; only edges inside the region depend on two letters.
    let k = phi.alphabet_size();
    let mut site_weight = vec![0.0; region.len() * k];
    let mut inner = Vec::new();
    for (i, p) in region.iter().enumerate() {
        for a in 0..k as Letter {
            let mut e = Energy::Finite(phi.vertex(a));
            for axis in 0..phi.dim() {
                for sign in [1, -1] {
                    let Ok(q) = p.step(axis, sign) else { continue };
                    if let Some(b) = near.get(&q) {
                        e = e + if sign > 0 { phi.edge(axis, a, b) } else { phi.edge(axis, b, a) };
                    } else if sign > 0 {
                        if let Some(j) = region.index_of(&q) {
                            if a == 0 {
                                inner.push((i, j, axis));
                            }
                        }
                    }
                }
            }
            site_weight[i * k + a as usize] = e.finite().map_or(f64::NEG_INFINITY, |u| -u);
        }
    }
    let _ = prob.csp.solve(ValueOrder::Ascending, Budget::UNLIMITED, |values| {
        let mut lw: f64 = values.iter().enumerate().map(|(i, &a)| site_weight[i * k + a as usize]).sum();
        for &(i, j, axis) in &inner {
            match phi.edge(axis, values[i], values[j]) {
                Energy::Finite(u) => lw -= u,
                Energy::Infinite => lw = f64::NEG_INFINITY,
            }
        }
        if lw > f64::NEG_INFINITY {
            f(values, lw);
        }
        ControlFlow::Continue(())
    });
    Ok(())
}

/// `Z^{Φ,δ}_S` (or `Z^Φ_S` without a boundary). Exhaustive enumeration for
/// regions up to [`EXACT_SITE_LIMIT`] sites; larger regions in `d ≤ 2` go
/// through a sweep.
pub fn partition_function(phi: &Interaction, region: &Shape, boundary: Option<&Pattern>) -> Result<LogZ, GibbsError> {
    let empty = Pattern::empty(phi.dim());
    let boundary = boundary.unwrap_or(&empty);
    if !region.is_disjoint(boundary.shape()) {
        return Err(SftError::Overlap.into());
    }
    if region.len() <= EXACT_SITE_LIMIT {
        let mut acc = LogAccumulator::new();
        for_each_weighted_fill(phi, region, boundary, |_, lw| acc.add(lw))?;
        return Ok(LogZ::from_log(acc.log()));
    }
    let log = sweep_log_partition(phi, region, boundary, None, DEFAULT_MAX_COLUMN)?;
    Ok(LogZ::from_log(log))
}

/// `Λ^δ_S(u)` by exhaustive enumeration of the fills of the region.
pub fn specification_prob(phi: &Interaction, q: &SpecQuery) -> Result<f64, GibbsError> {
    let mut all = LogAccumulator::new();
    let mut hit = LogAccumulator::new();
    let target: Vec<(usize, Letter)> =
        q.target.iter().map(|(s, a)| (q.region.index_of(s).expect("target lies in the region"), a)).collect();
    for_each_weighted_fill(phi, &q.region, &q.boundary, |values, lw| {
        all.add(lw);
        if target.iter().all(|&(i, a)| values[i] == a) {
            hit.add(lw);
        }
    })?;
    ratio(hit.log(), all.log())
}

fn ratio(num: f64, den: f64) -> Result<f64, GibbsError> {
    if den == f64::NEG_INFINITY {
        return Err(GibbsError::NonAdmissibleBoundary);
    }
    if num == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    Ok((num - den).exp().min(1.0))
}

/// The same conditional probability as [`specification_prob`], computed by
/// a column sweep; `d ∈ {1, 2}` and at most [`DEFAULT_MAX_COLUMN`] region
/// sites per column.
pub fn transfer_conditional(phi: &Interaction, region: &Shape, boundary: &Pattern, target: &Pattern) -> Result<f64, GibbsError> {
    transfer_conditional_with(phi, region, boundary, target, DEFAULT_MAX_COLUMN)
}

pub fn transfer_conditional_with(
    phi: &Interaction,
    region: &Shape,
    boundary: &Pattern,
    target: &Pattern,
    max_column: usize,
) -> Result<f64, GibbsError> {
    if !target.shape().is_subset(region) {
        return Err(GibbsError::TargetOutsideRegion);
    }
    let den = sweep_log_partition(phi, region, boundary, None, max_column)?;
    let num = sweep_log_partition(phi, region, boundary, Some(target), max_column)?;
    ratio(num, den)
}

/// Largest number of region sites sharing all coordinates but the last.
pub fn column_height(region: &Shape) -> usize {
    if region.dim() == 1 {
        return usize::from(!region.is_empty());
    }
    let mut best = 0;
    let mut run = 0;
    let mut prev: Option<&[i32]> = None;
    for s in region.iter() {
        let head = &s.coords()[..s.dim() - 1];
        if prev == Some(head) {
            run += 1;
        } else {
            run = 1;
            prev = Some(head);
        }
        best = best.max(run);
    }
    best
}

fn sweep_log_partition(
    phi: &Interaction,
    region: &Shape,
    boundary: &Pattern,
    target: Option<&Pattern>,
    max_column: usize,
) -> Result<f64, GibbsError> {
    let d = phi.dim();
    if !(1..=2).contains(&d) {
        return Err(SftError::WrongDimension { expected: "1 or 2".into(), got: d }.into());
    }
    let height = column_height(region);
    if height > max_column {
        return Err(GibbsError::ColumnTooTall { height, max: max_column });
    }
    let full = phi.alphabet().full_mask();
    let sites: Vec<SweepSite> = region
        .iter()
        .map(|s| SweepSite {
            site: s.clone(),
            role: Role::Free,
            mask: target.and_then(|t| t.get(s)).map_or(full, |a| 1u64 << a),
        })
        .collect();
    let near = boundary.restrict(&region.boundary()?);
    let r = sweep::<LogSum>(&phi.local_weights(), &sites, &near, SweepLimits::default())?;
    Ok(r.scalar().0)
}
