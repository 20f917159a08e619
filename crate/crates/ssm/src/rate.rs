//! Closed-form rate and threshold formulas.
//!
//! For the Lipschitz height model `X_g^d` with activity `λ`, the coupling
//! argument gives exponential SSM with `β = (2d-1)(g+1)^{|N_g(0)|} λ^{-1/2}`,
//! rate `α = -log β` and constant `C = 4d / (β^g (1-β))` whenever `β < 1`.
//! The simpler sufficient threshold `λ > (2d-1)^2 (g+1)^{(2g+1)^{2d}}` uses
//! `|N_g(0)| ≤ (2g+1)^d`.

use num_bigint::BigUint;
use num_traits::{FromPrimitive, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::SsmError;

/// Above this many bits the published threshold is reported by its log only.
pub const MAX_THRESHOLD_BITS: f64 = (1u64 << 26) as f64;

/// `|N_g(0)|`: lattice points within ℓ1 distance `g` of the origin in `Z^d`.
pub fn ball_size(g: u32, d: u32) -> u64 {
    // Σ_k 2^k C(d,k) C(g,k)
    let binom = |n: u64, k: u64| -> u64 { (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1)) };
    (0..=d.min(g) as u64).map(|k| (1u64 << k) * binom(d as u64, k) * binom(g as u64, k)).sum()
}

fn decimal<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn decimal_opt<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateCertificate {
    pub g: u32,
    pub d: u32,
    pub lambda: f64,
    /// `|N_g(0)|`.
    pub ball: u64,
    pub alpha: f64,
    pub beta: f64,
    /// `4d / (β^g (1-β))`; infinite when no rate is guaranteed.
    pub c: f64,
    /// `β < 1`, decided exactly against [`RateCertificate::beta_threshold`].
    pub guaranteed: bool,
    /// The activity at which `β = 1`: `((2d-1)(g+1)^{|N_g(0)|})^2`.
    #[serde(serialize_with = "decimal")]
    pub beta_threshold: BigUint,
    /// `(2d-1)^2 (g+1)^{(2g+1)^{2d}}`, when it has at most
    /// [`MAX_THRESHOLD_BITS`] bits.
    #[serde(serialize_with = "decimal_opt")]
    pub published_threshold: Option<BigUint>,
    pub log_published_threshold: f64,
}

/// `λ > t` for a positive float and a big integer, decided exactly.
fn exceeds(lambda: f64, t: &BigUint) -> bool {
    let floor = BigUint::from_f64(lambda.floor()).expect("finite positive");
    if lambda.fract() == 0.0 {
        &floor > t
    } else {
        &floor >= t
    }
}

pub fn andes_rate(g: u32, d: u32, lambda: f64) -> Result<RateCertificate, SsmError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(SsmError::Invalid(format!("λ must be positive and finite, got {lambda}")));
    }
    if d == 0 {
        return Err(SsmError::UnsupportedDimension(0));
    }
    let ball = ball_size(g, d);
    let base = BigUint::from(g + 1);
    let two_d_minus_one = BigUint::from(2 * d - 1);
    let inner = &two_d_minus_one * num_traits::pow(base.clone(), ball as usize);
    let beta_threshold = &inner * &inner;
    let ln_g1 = ((g + 1) as f64).ln();
    let ln_2dm1 = ((2 * d - 1) as f64).ln();
    let alpha = 0.5 * lambda.ln() - ln_2dm1 - ball as f64 * ln_g1;
    let beta = (-alpha).exp();
    let guaranteed = exceeds(lambda, &beta_threshold);
    let c = if guaranteed { 4.0 * d as f64 / (beta.powi(g as i32) * (1.0 - beta)) } else { f64::INFINITY };
    let exponent = (2.0 * g as f64 + 1.0).powi(2 * d as i32);
    let log_published_threshold = 2.0 * ln_2dm1 + exponent * ln_g1;
    let published_threshold = (exponent * (g as f64 + 1.0).log2() <= MAX_THRESHOLD_BITS).then(|| {
        let e = (2 * g as u64 + 1).pow(2 * d);
        &two_d_minus_one * &two_d_minus_one * num_traits::pow(base, e as usize)
    });
    Ok(RateCertificate {
        g,
        d,
        lambda,
        ball,
        alpha,
        beta,
        c,
        guaranteed,
        beta_threshold,
        published_threshold,
        log_published_threshold,
    })
}

impl RateCertificate {
    /// The guaranteed bound `C e^{-α n}` at distance `n`.
    pub fn bound(&self, n: u32) -> f64 {
        if self.guaranteed {
            self.c * (-self.alpha * n as f64).exp()
        } else {
            f64::INFINITY
        }
    }

    pub fn beta_threshold_f64(&self) -> f64 {
        self.beta_threshold.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Rate above which exponential SSM on the plane forces TSSM of the support.
pub fn rate_tssm_threshold(alphabet_size: usize) -> f64 {
    4.0 * (alphabet_size as f64).ln()
}

/// `α > 4 log|A|` (strictly); the statement is for the plane only.
pub fn rate_implies_tssm(alpha: f64, alphabet_size: usize, d: usize) -> Result<bool, SsmError> {
    if d != 2 {
        return Err(SsmError::UnsupportedDimension(d));
    }
    if alphabet_size == 0 {
        return Err(SsmError::Invalid("empty alphabet".into()));
    }
    Ok(alpha > rate_tssm_threshold(alphabet_size))
}
