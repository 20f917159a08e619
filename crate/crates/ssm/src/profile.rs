//! Empirical finite-volume decay profiles.
//!
//! For each distance the profile records the largest
//! `|μ^{δ1}(u) - μ^{δ2}(u)|` over single-site events `u` at a target site
//! and boundary pairs `δ1, δ2` that agree off a disagreement locus. The SSM
//! profile measures distance to the locus; the WSM profile lets the pair
//! differ anywhere on the unpinned boundary and measures distance to the
//! whole boundary. One sweep with the unpinned boundary kept yields
//! `μ^δ(u)` for every boundary at once.

use std::collections::BTreeMap;

use nnsft_core::lattice::{dist, rhomboid, Distance};
use nnsft_core::sweep::{sweep, LogSum, Role, SweepLimits, SweepSite};
use nnsft_core::{Admissibility, Letter, Pattern, Shape, Site};
use nnsft_gibbs::Interaction;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::SsmError;

/// One region with its target, pinned boundary part and disagreement locus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileGeometry {
    pub region: Shape,
    pub target: Site,
    /// Boundary sites where the two boundaries may differ.
    pub locus: Shape,
    /// Boundary letters shared by every boundary considered.
    pub context: Pattern,
}

/// Families of geometries indexed by `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BoundaryFamily {
    /// `W = R_n` (an interval on the line), target at the origin,
    /// disagreement at `(n+1, 0, …)`.
    Rhomboids,
    /// `W = [-2n+1, 2n-1] × {0}`, target at the origin; the rows above and
    /// below are pinned to alternate between letters `a` and `b`, out of
    /// phase with each other, and the boundaries differ at the two ends.
    Stripe { a: Letter, b: Letter },
    /// Explicit geometries; `n` indexes the list.
    Custom { geometries: Vec<ProfileGeometry> },
}

impl BoundaryFamily {
    pub fn geometry(&self, n: u32, d: usize) -> Result<ProfileGeometry, SsmError> {
        let origin = Site::origin(d);
        match self {
            BoundaryFamily::Rhomboids => {
                let region = rhomboid(n, d)?;
                let mut c = vec![0i64; d];
                c[0] = n as i64 + 1;
                Ok(ProfileGeometry { region, target: origin, locus: Shape::singleton(Site::new(&c)?), context: Pattern::empty(d) })
            }
            BoundaryFamily::Stripe { a, b } => {
                if d != 2 || n == 0 {
                    return Err(SsmError::Invalid("the stripe family needs d = 2 and n ≥ 1".into()));
                }
                let m = 2 * n as i64;
                let region = Shape::from_sites(2, (1 - m..m).map(|i| Site::new(&[i, 0]).expect("small")))?;
                let locus = Shape::from_coords(2, &[&[-m, 0], &[m, 0]])?;
                let context = Pattern::from_pairs(
                    2,
                    (1 - m..m).flat_map(|i| {
                        let even = i.rem_euclid(2) == 0;
                        [
                            (Site::new(&[i, 1]).expect("small"), if even { *a } else { *b }),
                            (Site::new(&[i, -1]).expect("small"), if even { *b } else { *a }),
                        ]
                    }),
                )?;
                Ok(ProfileGeometry { region, target: origin, locus, context })
            }
            BoundaryFamily::Custom { geometries } => {
                geometries.get(n as usize).cloned().ok_or_else(|| SsmError::Invalid(format!("no geometry with index {n}")))
            }
        }
    }
}

/// A pair of boundaries attaining a profile value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyWitness {
    pub letter: Letter,
    pub delta1: Pattern,
    pub delta2: Pattern,
    pub p1: f64,
    pub p2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub n: u32,
    pub distance: u64,
    pub max_discrepancy: f64,
    /// Admissible boundaries enumerated.
    pub boundaries: usize,
    pub witness: Option<DiscrepancyWitness>,
}

/// Least-squares fit of `log f(n) = log C - α n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub c: f64,
    pub alpha: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    /// "ssm" or "wsm".
    pub kind: String,
    pub points: Vec<ProfilePoint>,
    pub fit: Option<DecayFit>,
    pub note: String,
}

impl DecayProfile {
    pub fn distances(&self) -> Vec<u64> {
        self.points.iter().map(|p| p.distance).collect()
    }

    pub fn max_discrepancy(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.max_discrepancy).collect()
    }

    /// `n,distance,max_discrepancy` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,distance,max_discrepancy\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{:e}\n", p.n, p.distance, p.max_discrepancy));
        }
        out
    }
}

/// Limit on the number of unpinned boundary assignments per geometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileBudget {
    pub max_boundaries: u64,
}

impl Default for ProfileBudget {
    fn default() -> Self {
        ProfileBudget { max_boundaries: 1 << 22 }
    }
}

/// Fits only discrepancies above ten machine epsilons.
pub fn fit_decay(points: &[ProfilePoint]) -> Option<DecayFit> {
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.max_discrepancy > 10.0 * f64::EPSILON)
        .map(|p| (p.distance as f64, p.max_discrepancy.ln()))
        .collect();
    let m = data.len();
    if m < 2 {
        return None;
    }
    let mx = data.iter().map(|d| d.0).sum::<f64>() / m as f64;
    let my = data.iter().map(|d| d.1).sum::<f64>() / m as f64;
    let sxx: f64 = data.iter().map(|d| (d.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = data.iter().map(|d| (d.0 - mx) * (d.1 - my)).sum::<f64>() / sxx;
    let intercept = my - slope * mx;
    let residual = (data.iter().map(|d| (d.1 - intercept - slope * d.0).powi(2)).sum::<f64>() / m as f64).sqrt();
    Some(DecayFit { c: intercept.exp(), alpha: -slope, residual, points: m })
}

/// `μ^δ(u)` for every admissible unpinned boundary `δ` and letter `u`.
struct Conditionals {
    kept: Vec<Site>,
    /// (kept letters, per-letter probabilities)
    rows: Vec<(Vec<Letter>, Vec<f64>)>,
}

fn conditionals(
    phi: &Interaction,
    geo: &ProfileGeometry,
    adm: &dyn Admissibility,
    budget: ProfileBudget,
) -> Result<Conditionals, SsmError> {
    let d = phi.dim();
    if geo.region.dim() != d || !geo.region.contains(&geo.target) {
        return Err(SsmError::Invalid("the target must lie in the region".into()));
    }
    let bd = geo.region.boundary()?;
    if !geo.locus.is_subset(&bd) || !geo.context.shape().is_subset(&bd) || !geo.locus.is_disjoint(geo.context.shape()) {
        return Err(SsmError::Invalid("locus and context must be disjoint parts of ∂W".into()));
    }
    let open = bd.difference(geo.context.shape())?;
    let k = phi.alphabet_size() as f64;
    if k.powi(open.len() as i32) > budget.max_boundaries as f64 {
        return Err(SsmError::Budget(format!("{} letters on {} boundary sites", phi.alphabet_size(), open.len())));
    }
    let full = phi.alphabet().full_mask();
    let run = |target: Option<Letter>| {
        let mut sites: Vec<SweepSite> = geo
            .region
            .iter()
            .map(|s| {
                let mask = match target {
                    Some(a) if *s == geo.target => 1u64 << a,
                    _ => full,
                };
                SweepSite { site: s.clone(), role: Role::Free, mask }
            })
            .chain(open.iter().map(|s| SweepSite { site: s.clone(), role: Role::Kept, mask: full }))
            .collect();
        sites.sort_by(|a, b| a.site.cmp(&b.site));
        sweep::<LogSum>(&phi.local_weights(), &sites, &geo.context, SweepLimits::default())
    };
    let den = run(None)?;
    let nums = (0..phi.alphabet_size() as Letter).map(|a| run(Some(a))).collect::<Result<Vec<_>, _>>()?;
    let kept_shape = Shape::from_sites(d, den.kept.iter().cloned())?;
    let rows: Vec<(Vec<Letter>, Vec<f64>)> = den
        .entries
        .par_iter()
        .filter_map(|(letters, z)| {
            let delta = Pattern::new(kept_shape.clone(), letters.clone()).expect("kept letters");
            let whole = delta.union(&geo.context).expect("disjoint");
            adm.is_admissible(&whole).then(|| {
                let probs = nums.iter().map(|num| (num.lookup(letters).0 - z.0).exp()).collect();
                (letters.clone(), probs)
            })
        })
        .collect();
    Ok(Conditionals { kept: den.kept, rows })
}

fn profile_point(
    phi: &Interaction,
    geo: &ProfileGeometry,
    locus: &Shape,
    distance: u64,
    n: u32,
    adm: &dyn Admissibility,
    budget: ProfileBudget,
) -> Result<ProfilePoint, SsmError> {
    let c = conditionals(phi, geo, adm, budget)?;
    let outside: Vec<usize> = c.kept.iter().enumerate().filter(|(_, s)| !locus.contains(s)).map(|(i, _)| i).collect();
    let mut groups: BTreeMap<Vec<Letter>, Vec<usize>> = BTreeMap::new();
    for (r, (letters, _)) in c.rows.iter().enumerate() {
        groups.entry(outside.iter().map(|&i| letters[i]).collect()).or_default().push(r);
    }
    let mut best: Option<(f64, Letter, usize, usize)> = None;
    for members in groups.values() {
        for a in 0..phi.alphabet_size() {
            let lo = members.iter().copied().min_by(|&x, &y| c.rows[x].1[a].total_cmp(&c.rows[y].1[a])).expect("nonempty");
            let hi = members.iter().copied().max_by(|&x, &y| c.rows[x].1[a].total_cmp(&c.rows[y].1[a]).then(y.cmp(&x))).expect("nonempty");
            let gap = c.rows[hi].1[a] - c.rows[lo].1[a];
            if best.is_none_or(|b| gap > b.0) {
                best = Some((gap, a as Letter, hi, lo));
            }
        }
    }
    let kept = Shape::from_sites(phi.dim(), c.kept.iter().cloned())?;
    let pattern = |r: usize| -> Pattern {
        Pattern::new(kept.clone(), c.rows[r].0.clone()).expect("kept letters").union(&geo.context).expect("disjoint")
    };
    let witness = best.map(|(_, letter, hi, lo)| DiscrepancyWitness {
        letter,
        delta1: pattern(hi),
        delta2: pattern(lo),
        p1: c.rows[hi].1[letter as usize],
        p2: c.rows[lo].1[letter as usize],
    });
    Ok(ProfilePoint {
        n,
        distance,
        max_discrepancy: best.map_or(0.0, |b| b.0.clamp(0.0, 1.0)),
        boundaries: c.rows.len(),
        witness,
    })
}

fn finite(d: Distance) -> Result<u64, SsmError> {
    d.finite().ok_or_else(|| SsmError::Invalid("empty disagreement locus".into()))
}

/// Strong spatial mixing profile: pairs differing only on the locus, at
/// distance `dist(target, locus)`.
pub fn ssm_profile(
    phi: &Interaction,
    family: &BoundaryFamily,
    n_range: impl IntoIterator<Item = u32>,
    adm: &dyn Admissibility,
    budget: ProfileBudget,
) -> Result<DecayProfile, SsmError> {
    let mut points = Vec::new();
    for n in n_range {
        let geo = family.geometry(n, phi.dim())?;
        let distance = finite(dist(&Shape::singleton(geo.target.clone()), &geo.locus)?)?;
        points.push(profile_point(phi, &geo, &geo.locus, distance, n, adm, budget)?);
    }
    Ok(finish("ssm", points))
}

/// Weak spatial mixing profile: pairs free to differ anywhere off the
/// pinned context, at distance `dist(target, ∂W)`.
pub fn wsm_profile(
    phi: &Interaction,
    family: &BoundaryFamily,
    n_range: impl IntoIterator<Item = u32>,
    adm: &dyn Admissibility,
    budget: ProfileBudget,
) -> Result<DecayProfile, SsmError> {
    let mut points = Vec::new();
    for n in n_range {
        let geo = family.geometry(n, phi.dim())?;
        let bd = geo.region.boundary()?;
        let distance = finite(dist(&Shape::singleton(geo.target.clone()), &bd)?)?;
        let open = bd.difference(geo.context.shape())?;
        points.push(profile_point(phi, &geo, &open, distance, n, adm, budget)?);
    }
    Ok(finish("wsm", points))
}

fn finish(kind: &str, points: Vec<ProfilePoint>) -> DecayProfile {
    DecayProfile {
        kind: kind.into(),
        fit: fit_decay(&points),
        points,
        note: "empirical, finite-volume".into(),
    }
}
