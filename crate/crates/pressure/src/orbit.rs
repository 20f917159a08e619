//! Pressure brackets from a periodic orbit.
//!
//! For a periodic point `z` with fundamental cell `C`, the pressure equals
//! the orbit average of `-log p(σ_p z) + A_Φ(σ_p z)`, where `p(x)` is the
//! conditional probability of `x(0)` given the lexicographic past. With
//! `W_n = R_n` minus the past and `∂W_n = S_n ⊔ V_n` (past and future
//! parts), that conditional is a weighted average over future boundaries
//! `δ` on `V_n` of the finite-volume conditional given `x(S_n)δ`. The extreme
//! values over all `δ` with `x(S_n)δ` globally admissible therefore bracket
//! it, and so bracket the pressure.

use std::time::Instant;

use nnsft_core::admissibility::{Admissibility, LineExact, LocalSuffices, PeriodicExtension};
use nnsft_core::lattice::half_rhomboid;
use nnsft_core::sweep::{sweep, LogSum, Role, SweepLimits, SweepResult, SweepSite};
use nnsft_core::{Letter, Pattern, PeriodicPoint, Shape, Site};
use nnsft_gibbs::{transfer_conditional_with, Interaction};
use nnsft_mixing::{MixingCertificate, Property, Provenance};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::PressureError;

/// `A_Φ(σ_p z) = -Φ(x(0)) - Σ_i Φ(x(0) x(e_i))` with `x = σ_p z`.
pub fn a_phi_at(phi: &Interaction, z: &PeriodicPoint, p: &Site) -> Result<f64, PressureError> {
    phi.site_functional(|q| z.letter_at(&q.translate(p).expect("small coordinates")))
        .ok_or_else(|| PressureError::Invalid(format!("the periodic point carries a forbidden pair at {p}")))
}

/// Extremes of the finite-volume conditional at one orbit site.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalBounds {
    pub min: f64,
    pub max: f64,
    /// Boundaries on `V_n` attaining the extremes.
    pub argmin: Pattern,
    pub argmax: Pattern,
    /// Number of admissible boundaries taken into account.
    pub boundaries: usize,
}

struct Geometry {
    w: Shape,
    fixed: Pattern,
    v: Shape,
    target: Letter,
}

fn geometry(z: &PeriodicPoint, p: &Site, n: u32) -> Result<Geometry, PressureError> {
    let x = z.shifted(p);
    let hr = half_rhomboid(n, z.dim())?;
    let fixed = x.restrict(&hr.s);
    let target = x.letter_at(&Site::origin(z.dim()));
    Ok(Geometry { w: hr.w, fixed, v: hr.v, target })
}

/// One sweep over `W_n ∪ V_n` with `V_n` kept; `pin` restricts the kept
/// letters, `target` restricts the origin.
fn boundary_sweep(
    phi: &Interaction,
    geo: &Geometry,
    pin: Option<&Pattern>,
    target: Option<Letter>,
) -> Result<SweepResult<LogSum>, PressureError> {
    let full = phi.underlying_sft().alphabet().full_mask();
    let origin = Site::origin(phi.dim());
    let mut sites: Vec<SweepSite> = geo
        .w
        .iter()
        .map(|s| {
            let mask = match target {
                Some(a) if *s == origin => 1u64 << a,
                _ => full,
            };
            SweepSite { site: s.clone(), role: Role::Free, mask }
        })
        .chain(geo.v.iter().map(|s| {
            let mask = pin.and_then(|d| d.get(s)).map_or(full, |a| 1u64 << a);
            SweepSite { site: s.clone(), role: Role::Kept, mask }
        }))
        .collect();
    sites.sort_by(|a, b| a.site.cmp(&b.site));
    Ok(sweep(&phi.local_weights(), &sites, &geo.fixed, SweepLimits::default())?)
}

fn ratio(num: &LogSum, den: &LogSum) -> f64 {
    if num.0 == f64::NEG_INFINITY {
        0.0
    } else {
        (num.0 - den.0).exp()
    }
}

/// Minimum and maximum over future boundaries `δ` of the conditional
/// probability of `x(0)` given `x(S_n)δ`, where `x = σ_p z`.
///
/// Only boundaries with `x(S_n)δ` accepted by `adm` count: global
/// admissibility stands in for positive measure, which holds for Gibbs
/// measures with full support. Two log-domain sweeps with `V_n` kept give
/// the numerator and the partition function for every `δ` at once.
pub fn conditional_bounds_at(
    phi: &Interaction,
    z: &PeriodicPoint,
    p: &Site,
    n: u32,
    adm: &dyn Admissibility,
) -> Result<ConditionalBounds, PressureError> {
    if n == 0 || phi.dim() > 2 {
        return Err(PressureError::Invalid("need n ≥ 1 and d ∈ {1, 2}".into()));
    }
    let geo = geometry(z, p, n)?;
    let den = boundary_sweep(phi, &geo, None, None)?;
    let num = boundary_sweep(phi, &geo, None, Some(geo.target))?;
    let kept = Shape::from_sites(phi.dim(), den.kept.iter().cloned())?;
    let candidates: Vec<(usize, f64)> = den
        .entries
        .par_iter()
        .enumerate()
        .filter_map(|(i, (letters, d))| {
            let delta = Pattern::new(kept.clone(), letters.clone()).expect("kept letters");
            let with_past = geo.fixed.union(&delta).expect("disjoint");
            adm.is_admissible(&with_past).then(|| (i, ratio(&num.lookup(letters), d)))
        })
        .collect();
    // ties go to the first boundary in key order
    let lo = candidates.iter().min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let hi = candidates.iter().max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
    let (Some(&(imin, min)), Some(&(imax, max))) = (lo, hi) else {
        return Err(PressureError::NoAdmissibleBoundary(p.to_string()));
    };
    let pat = |i: usize| Pattern::new(kept.clone(), den.entries[i].0.clone()).expect("kept letters");
    Ok(ConditionalBounds { min, max, argmin: pat(imin), argmax: pat(imax), boundaries: candidates.len() })
}

/// The conditional for one given boundary `δ` on `V_n`, computed by the
/// same sweep with the kept letters pinned, so it reproduces the values
/// behind [`conditional_bounds_at`] exactly.
pub fn conditional_at_boundary(
    phi: &Interaction,
    z: &PeriodicPoint,
    p: &Site,
    n: u32,
    delta: &Pattern,
) -> Result<f64, PressureError> {
    let geo = geometry(z, p, n)?;
    if delta.shape() != &geo.v {
        return Err(PressureError::Invalid("δ must cover the future boundary V_n".into()));
    }
    let den = boundary_sweep(phi, &geo, Some(delta), None)?;
    let num = boundary_sweep(phi, &geo, Some(delta), Some(geo.target))?;
    let key: Vec<Letter> = den.kept.iter().map(|s| delta.get(s).expect("on V_n")).collect();
    let d = den.lookup(&key);
    if d.0 == f64::NEG_INFINITY {
        return Err(PressureError::Invalid("δ admits no fill of W_n".into()));
    }
    Ok(ratio(&num.lookup(&key), &d))
}

/// Per-orbit-site detail of a bracket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteBounds {
    pub site: Site,
    pub a_phi: f64,
    pub min: f64,
    pub max: f64,
    pub boundaries: usize,
}

/// A two-sided bracket for the pressure at truncation `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundPair {
    pub n: u32,
    pub lower: f64,
    pub upper: f64,
    pub per_site: Vec<SiteBounds>,
    /// Orbit sites whose `-log min` hit the cap.
    pub clamped: usize,
    pub seconds: f64,
}

impl BoundPair {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

/// Which admissibility decider a job uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decider {
    /// Local admissibility, valid under single-site fillability.
    Local,
    /// Exact one-dimensional reachability.
    Line,
    /// The band decider with the given strong-irreducibility gap.
    Band { gap: u32 },
}

/// Everything needed to bracket the pressure of one interaction.
#[derive(Clone, Debug)]
pub struct PressureJob {
    pub phi: Interaction,
    pub z: PeriodicPoint,
    pub tssm_gap: u32,
    pub n_schedule: Vec<u32>,
    pub epsilon: f64,
    /// Cap on `-log` of a conditional; reaching it is reported loudly.
    pub neg_log_cap: f64,
    pub decider: Decider,
    /// Human-readable list of what the results rely on.
    pub assumptions: Vec<String>,
}

pub const DEFAULT_SCHEDULE: [u32; 7] = [2, 3, 4, 5, 6, 7, 8];
pub const DEFAULT_NEG_LOG_CAP: f64 = 700.0;

impl PressureJob {
    /// Builds a job from mixing certificates; a TSSM certificate is required.
    pub fn new(phi: Interaction, z: PeriodicPoint, certs: &[MixingCertificate]) -> Result<PressureJob, PressureError> {
        z.validate(phi.underlying_sft())?;
        let tssm = certs
            .iter()
            .filter(|c| matches!(c.property, Property::Tssm { .. }))
            .min_by_key(|c| c.property.gap())
            .ok_or(PressureError::MissingCertificate)?;
        let g = tssm.property.gap().expect("TSSM has a gap");
        let ssf = certs.iter().any(|c| c.property == Property::Ssf);
        let si = nnsft_mixing::si_gap(certs).unwrap_or(g).min(g);
        let decider = if ssf {
            Decider::Local
        } else if phi.dim() == 1 {
            Decider::Line
        } else {
            Decider::Band { gap: si }
        };
        let how = match tssm.provenance {
            Provenance::Implication { from } => format!("via {from}"),
            Provenance::ExhaustiveCheck => "by exhaustive check".into(),
            Provenance::UserAsserted => "user asserted".into(),
        };
        let assumptions = vec![
            format!("TSSM gap {g} {how}"),
            "full support via D-condition (global admissibility stands in for positive measure)".into(),
        ];
        Ok(PressureJob {
            phi,
            z,
            tssm_gap: g,
            n_schedule: DEFAULT_SCHEDULE.to_vec(),
            epsilon: 1e-3,
            neg_log_cap: DEFAULT_NEG_LOG_CAP,
            decider,
            assumptions,
        })
    }

    pub fn with_schedule(mut self, schedule: Vec<u32>) -> Self {
        self.n_schedule = schedule;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// Runs `f` with the job's admissibility decider.
    pub fn with_decider<T>(&self, f: impl FnOnce(&dyn Admissibility) -> T) -> Result<T, PressureError> {
        let x = self.phi.underlying_sft().clone();
        Ok(match self.decider {
            Decider::Local => f(&LocalSuffices::assume_ssf(x)),
            Decider::Line => f(&LineExact::new(x)?),
            Decider::Band { gap } => {
                let band = PeriodicExtension::new(x, gap, self.z.clone())?;
                f(&nnsft_core::admissibility::Cached::new(&band))
            }
        })
    }
}

/// The bracket at truncation `n`, averaged over the fundamental cell.
pub fn pressure_bounds(job: &PressureJob, n: u32) -> Result<BoundPair, PressureError> {
    let start = Instant::now();
    let cell: Vec<Site> = job.z.cell().shape().sites().to_vec();
    let per_site = job.with_decider(|adm| {
        cell.iter()
            .map(|p| {
                let cb = conditional_bounds_at(&job.phi, &job.z, p, n, adm)?;
                Ok(SiteBounds {
                    site: p.clone(),
                    a_phi: a_phi_at(&job.phi, &job.z, p)?,
                    min: cb.min,
                    max: cb.max,
                    boundaries: cb.boundaries,
                })
            })
            .collect::<Result<Vec<_>, PressureError>>()
    })??;
    let mut clamped = 0;
    let (mut lower, mut upper) = (0.0, 0.0);
    for sb in &per_site {
        let hi = -sb.min.ln();
        if hi > job.neg_log_cap {
            clamped += 1;
            log::warn!("conditional at {} is below exp(-{}); the upper bound is clamped", sb.site, job.neg_log_cap);
        }
        lower += -sb.max.ln() + sb.a_phi;
        upper += hi.min(job.neg_log_cap) + sb.a_phi;
    }
    let m = cell.len() as f64;
    Ok(BoundPair {
        n,
        lower: crate::entropy::round_down(lower / m),
        upper: crate::entropy::round_up(upper / m),
        per_site,
        clamped,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Result of running a schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    /// Intersection of all brackets computed so far.
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
    pub n_used: u32,
    pub trace: Vec<BoundPair>,
}

/// Runs the schedule until the intersected bracket is at most `epsilon`
/// wide. Fails with the best bracket attached when the schedule runs out.
pub fn pressure_estimate(job: &PressureJob) -> Result<Estimate, PressureError> {
    let mut est = Estimate { value: f64::NAN, lower: f64::NEG_INFINITY, upper: f64::INFINITY, width: f64::INFINITY, n_used: 0, trace: Vec::new() };
    for &n in &job.n_schedule {
        let b = pressure_bounds(job, n)?;
        est.lower = est.lower.max(b.lower);
        est.upper = est.upper.min(b.upper);
        if est.lower > est.upper {
            return Err(PressureError::InconsistentBrackets);
        }
        est.width = est.upper - est.lower;
        est.value = 0.5 * (est.lower + est.upper);
        est.n_used = n;
        est.trace.push(b);
        if est.width <= job.epsilon {
            return Ok(est);
        }
    }
    Err(PressureError::NotConverged(Box::new(est)))
}

/// The single-site representation for a fixed point made of a safe symbol:
/// `P = -log p(x) + A_Φ(x)` with `x` constant. Each boundary is evaluated
/// by its own transfer computation rather than one sweep with kept sites,
/// which makes this an independent route to the cell-size-one bracket.
pub fn gamarnik_katz_bounds(
    phi: &Interaction,
    safe: Letter,
    n: u32,
    adm: &dyn Admissibility,
) -> Result<(f64, f64), PressureError> {
    let x = phi.underlying_sft();
    let d = phi.dim();
    let hr = half_rhomboid(n, d)?;
    let past = Pattern::constant(hr.s.clone(), safe);
    let target = Pattern::single(Site::origin(d), safe);
    let k = x.alphabet_size() as u64;
    let total = k.checked_pow(hr.v.len() as u32).ok_or_else(|| PressureError::Invalid("too many boundaries".into()))?;
    let values: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|mut code| {
            let letters: Vec<Letter> = (0..hr.v.len())
                .map(|_| {
                    let a = (code % k) as Letter;
                    code /= k;
                    a
                })
                .collect();
            let delta = Pattern::new(hr.v.clone(), letters).expect("one letter per site");
            let boundary = past.union(&delta).expect("disjoint");
            if !adm.is_admissible(&boundary) {
                return Ok(None);
            }
            Ok(Some(transfer_conditional_with(phi, &hr.w, &boundary, &target, usize::MAX)?))
        })
        .collect::<Result<Vec<Option<f64>>, PressureError>>()?
        .into_iter()
        .flatten()
        .collect();
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if values.is_empty() {
        return Err(PressureError::NoAdmissibleBoundary(Site::origin(d).to_string()));
    }
    let a = phi
        .site_functional(|_| safe)
        .ok_or_else(|| PressureError::Invalid("the constant point is not in the shift".into()))?;
    Ok((-max.ln() + a, -min.ln() + a))
}
