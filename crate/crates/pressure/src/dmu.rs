//! Uniform lower bounds on single-site conditional probabilities.

use nnsft_core::sweep::{sweep, LogSum, Role, SweepLimits, SweepSite, SweepValue};
use nnsft_core::{Admissibility, Pattern, Shape};
use nnsft_core::lattice::{block, rhomboid};
use nnsft_gibbs::Interaction;
use serde::{Deserialize, Serialize};

use crate::error::PressureError;

/// Min-plus values: the lightest single fill.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogMin(pub f64);

impl SweepValue for LogMin {
    fn zero() -> Self {
        LogMin(f64::INFINITY)
    }
    fn one() -> Self {
        LogMin(0.0)
    }
    fn is_zero(&self) -> bool {
        self.0 == f64::INFINITY
    }
    fn add_assign(&mut self, other: &Self) {
        self.0 = self.0.min(other.0);
    }
    fn times(&self, w: f64) -> Self {
        LogMin(self.0 + w)
    }
}

/// Largest number of boundary sites handled by [`dmu_min`].
pub const DMU_BOUNDARY_LIMIT: usize = 24;

/// `D_μ(T)` and the boundary attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dmu {
    pub value: f64,
    pub log_value: f64,
    pub boundary: Pattern,
}

/// `D_μ(T)`: the smallest probability `Λ^δ_W(w)` over `W ⊆ T`, admissible
/// boundaries `δ` on `∂W` and fills `w` of positive weight.
///
/// Only `W = T` is evaluated. For `W ⊂ T`, any positive-weight fill `w` of
/// `W` next to `δ` extends to a fill `wu` of `T` next to some admissible
/// `δ'` on `∂T`, and `Λ^{δ'}_T(wu) ≤ Λ^δ_W(w)`, so the minimum is attained
/// at `W = T`. One sum sweep and one min-plus sweep with `∂T` kept give the
/// partition function and the lightest fill for every boundary.
pub fn dmu_min(phi: &Interaction, t: &Shape, adm: &dyn Admissibility) -> Result<Dmu, PressureError> {
    if t.is_empty() {
        return Err(PressureError::Invalid("T must be nonempty".into()));
    }
    let bd = t.boundary()?;
    if bd.len() > DMU_BOUNDARY_LIMIT {
        return Err(PressureError::Invalid(format!("∂T has {} sites, more than {DMU_BOUNDARY_LIMIT}", bd.len())));
    }
    let full = phi.underlying_sft().alphabet().full_mask();
    let mut sites: Vec<SweepSite> = t
        .iter()
        .map(|s| SweepSite { site: s.clone(), role: Role::Free, mask: full })
        .chain(bd.iter().map(|s| SweepSite { site: s.clone(), role: Role::Kept, mask: full }))
        .collect();
    sites.sort_by(|a, b| a.site.cmp(&b.site));
    let weights = phi.local_weights();
    let empty = Pattern::empty(phi.dim());
    let z = sweep::<LogSum>(&weights, &sites, &empty, SweepLimits::default())?;
    let light = sweep::<LogMin>(&weights, &sites, &empty, SweepLimits::default())?;
    let kept = Shape::from_sites(phi.dim(), z.kept.iter().cloned())?;
    let mut best: Option<(f64, Pattern)> = None;
    for (letters, lz) in &z.entries {
        let delta = Pattern::new(kept.clone(), letters.clone()).expect("kept letters");
        if !adm.is_admissible(&delta) {
            continue;
        }
        let lv = light.lookup(letters).0 - lz.0;
        if best.as_ref().is_none_or(|(b, _)| lv < *b) {
            best = Some((lv, delta));
        }
    }
    let (log_value, boundary) = best.ok_or_else(|| PressureError::NoAdmissibleBoundary("∂T".into()))?;
    Ok(Dmu { value: log_value.exp(), log_value, boundary })
}

/// Shape used for the `c_μ` bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CmuForm {
    /// `D_μ(B_g) |A|^{-2d(2g+1)^{d-1}}`, any dimension.
    Block,
    /// `D_μ(R_g) |A|^{-4g}`, plane only.
    Rhomboid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CmuBound {
    pub form: CmuForm,
    pub value: f64,
    pub log_value: f64,
    pub dmu: Dmu,
}

/// A positive lower bound on every single-site conditional given a
/// past-like finite set, for a model with TSSM gap `g`.
pub fn cmu_lower_bound(phi: &Interaction, g: u32, form: CmuForm, adm: &dyn Admissibility) -> Result<CmuBound, PressureError> {
    let d = phi.dim();
    let ln_a = (phi.alphabet_size() as f64).ln();
    let (shape, exponent) = match form {
        CmuForm::Block => (block(g, d)?, 2.0 * d as f64 * (2.0 * g as f64 + 1.0).powi(d as i32 - 1)),
        CmuForm::Rhomboid if d == 2 => (rhomboid(g, d)?, 4.0 * g as f64),
        CmuForm::Rhomboid => return Err(PressureError::Invalid("the rhomboid form is for the plane only".into())),
    };
    let dmu = dmu_min(phi, &shape, adm)?;
    let log_value = dmu.log_value - exponent * ln_a;
    Ok(CmuBound { form, value: log_value.exp(), log_value, dmu })
}
