//! Entropy upper bounds from locally admissible block counts, and exact
//! one-dimensional pressure.

use nnsft_core::counting::{count_locally_admissible_block, ln_biguint};
use nnsft_core::lattice::block;
use nnsft_core::onedim::Witness1D;
use nnsft_core::Nnsft;
use nnsft_gibbs::Interaction;

use crate::error::PressureError;

/// Rounds a computed value up by a few ulps plus the smallest normal, so
/// the result is an upper bound on the exact quantity it approximates.
pub fn round_up(v: f64) -> f64 {
    v + v.abs() * 8.0 * f64::EPSILON + f64::MIN_POSITIVE
}

pub fn round_down(v: f64) -> f64 {
    v - v.abs() * 8.0 * f64::EPSILON - f64::MIN_POSITIVE
}

/// `log |L^{l.a.}_{B_n}| / |B_n|` for `n = 1..=n_max`. Each term bounds the
/// entropy from above, since the entropy is the infimum of the sequence.
pub fn friedland_upper_bounds(x: &Nnsft, n_max: u32) -> Result<Vec<f64>, PressureError> {
    (1..=n_max)
        .map(|n| {
            let count = count_locally_admissible_block(x, n)?;
            let sites = block(n, x.dim())?.len() as f64;
            Ok(round_up(ln_biguint(&count) / sites))
        })
        .collect()
}

/// Pressure of a one-dimensional interaction: the log of the spectral
/// radius of `M[a][b] = exp(-Φ(a) - Φ(ab))` over allowed pairs, computed on
/// the essential letters by power iteration on `M + I`.
pub fn pressure_1d(phi: &Interaction) -> Result<f64, PressureError> {
    if phi.dim() != 1 {
        return Err(PressureError::Invalid("pressure_1d needs a one-dimensional interaction".into()));
    }
    let x = phi.underlying_sft();
    let ess = Witness1D::from_sft(x)?.essential_mask();
    let letters: Vec<u8> = (0..x.alphabet_size() as u8).filter(|a| ess >> a & 1 == 1).collect();
    if letters.is_empty() {
        return Err(nnsft_core::SftError::EmptyShift.into());
    }
    let k = letters.len();
    let mut m = vec![vec![0.0f64; k]; k];
    for (i, &a) in letters.iter().enumerate() {
        for (j, &b) in letters.iter().enumerate() {
            if let Some(e) = phi.edge(0, a, b).finite() {
                m[i][j] = (-phi.vertex(a) - e).exp();
            }
        }
    }
    let mut v = vec![1.0f64; k];
    let mut rho = 0.0;
    for it in 0..100_000 {
        let mut next: Vec<f64> = (0..k).map(|i| v[i] + (0..k).map(|j| m[i][j] * v[j]).sum::<f64>()).collect();
        let norm = next.iter().cloned().fold(0.0, f64::max);
        next.iter_mut().for_each(|x| *x /= norm);
        let diff = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = next;
        rho = norm - 1.0;
        if diff < 1e-15 && it > 10 {
            break;
        }
    }
    Ok(rho.ln())
}
