//! Built-in models.
//!
//! | name           | letters            | vertex `Φ(a)` | edge `Φ(a, b)`                    |
//! |----------------|--------------------|---------------|-----------------------------------|
//! | `hard_core`    | 0, 1               | `Φ(1) = -ln λ`| `+∞` on `11`                      |
//! | `ising`        | -1, +1             | `-E·a`        | `-J·a·b`                          |
//! | `potts`        | 1..=q              | 0             | `-J` when `a = b`                 |
//! | `checkerboard` | 1..=k              | 0             | `+∞` when `a = b`                 |
//! | `iceberg`      | -M..-1, +1..+M     | 0             | `+∞` when `a·b < -1`              |
//! | `lipschitz`    | 0..=g              | `-a·ln λ`     | `+∞` when `|a - b| > 1`           |

use std::collections::BTreeMap;

use nnsft_core::{Alphabet, Letter};

use crate::error::GibbsError;
use crate::interaction::{Energy, Interaction};

pub const MODEL_NAMES: [&str; 6] = ["hard_core", "ising", "potts", "checkerboard", "iceberg", "lipschitz"];

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    HardCore { lambda: f64, d: usize },
    Ising { field: f64, coupling: f64, d: usize },
    Potts { q: usize, coupling: f64, d: usize },
    Checkerboard { k: usize, d: usize },
    Iceberg { m: usize, d: usize },
    Lipschitz { g: usize, lambda: f64, d: usize },
}

fn invalid(msg: impl Into<String>) -> GibbsError {
    GibbsError::InvalidParameter(msg.into())
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::HardCore { .. } => "hard_core",
            Model::Ising { .. } => "ising",
            Model::Potts { .. } => "potts",
            Model::Checkerboard { .. } => "checkerboard",
            Model::Iceberg { .. } => "iceberg",
            Model::Lipschitz { .. } => "lipschitz",
        }
    }

    /// Reads a model from its name and numeric parameters. Recognised keys:
    /// `lambda`, `d`, `E`, `J`, `q`, `k`, `M`, `g` (lower-case forms accepted).
    pub fn from_params(name: &str, params: &BTreeMap<String, f64>) -> Result<Model, GibbsError> {
        let get = |keys: &[&str]| keys.iter().find_map(|k| params.get(*k).copied());
        let count = |keys: &[&str], default: Option<usize>| -> Result<usize, GibbsError> {
            match get(keys) {
                Some(v) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
                Some(v) => Err(invalid(format!("{} must be a non-negative integer, got {v}", keys[0]))),
                None => default.ok_or_else(|| invalid(format!("missing parameter {}", keys[0]))),
            }
        };
        let d = count(&["d"], Some(2))?;
        let m = match name {
            "hard_core" | "hard-core" | "hardcore" => Model::HardCore { lambda: get(&["lambda"]).unwrap_or(1.0), d },
            "ising" => Model::Ising {
                field: get(&["E", "e", "field"]).unwrap_or(0.0),
                coupling: get(&["J", "j", "coupling"]).unwrap_or(1.0),
                d,
            },
            "potts" => Model::Potts { q: count(&["q"], None)?, coupling: get(&["J", "j", "coupling"]).unwrap_or(1.0), d },
            "checkerboard" => Model::Checkerboard { k: count(&["k"], None)?, d },
            "iceberg" => Model::Iceberg { m: count(&["M", "m"], None)?, d },
            "lipschitz" => Model::Lipschitz { g: count(&["g"], None)?, lambda: get(&["lambda"]).unwrap_or(1.0), d },
            other => return Err(GibbsError::UnknownModel(other.to_string())),
        };
        Ok(m)
    }

    pub fn build(&self) -> Result<Interaction, GibbsError> {
        let d = match self {
            Model::HardCore { d, .. }
            | Model::Ising { d, .. }
            | Model::Potts { d, .. }
            | Model::Checkerboard { d, .. }
            | Model::Iceberg { d, .. }
            | Model::Lipschitz { d, .. } => *d,
        };
        if d == 0 {
            return Err(invalid("d must be at least 1"));
        }
        let hard = |ok: bool| if ok { Energy::Finite(0.0) } else { Energy::Infinite };
        match *self {
            Model::HardCore { lambda, .. } => {
                positive(lambda, "lambda")?;
                let beta = -lambda.ln();
                Interaction::from_fns(Alphabet::numbered(2)?, d, |a| if a == 1 { beta } else { 0.0 }, |a, b| hard(!(a == 1 && b == 1)))
            }
            Model::Ising { field, coupling, .. } => {
                if !field.is_finite() || !coupling.is_finite() {
                    return Err(invalid("E and J must be finite"));
                }
                let spin = |a: Letter| if a == 0 { -1.0 } else { 1.0 };
                Interaction::from_fns(Alphabet::new(["-1", "+1"])?, d, |a| -field * spin(a), |a, b| {
                    Energy::Finite(-coupling * spin(a) * spin(b))
                })
            }
            Model::Potts { q, coupling, .. } => {
                if q < 2 {
                    return Err(invalid("q must be at least 2"));
                }
                if !coupling.is_finite() {
                    return Err(invalid("J must be finite"));
                }
                Interaction::from_fns(colour_labels(q)?, d, |_| 0.0, |a, b| Energy::Finite(if a == b { -coupling } else { 0.0 }))
            }
            Model::Checkerboard { k, .. } => {
                if k < 2 {
                    return Err(invalid("k must be at least 2"));
                }
                Interaction::from_fns(colour_labels(k)?, d, |_| 0.0, |a, b| hard(a != b))
            }
            Model::Iceberg { m, .. } => {
                if m < 2 {
                    return Err(invalid("M must be at least 2"));
                }
                let m = m as i64;
                let vals: Vec<i64> = (-m..=-1).chain(1..=m).collect();
                let alpha = Alphabet::new(vals.iter().map(|v| format!("{v:+}")))?;
                Interaction::from_fns(alpha, d, |_| 0.0, |a, b| hard(vals[a as usize] * vals[b as usize] >= -1))
            }
            Model::Lipschitz { g, lambda, .. } => {
                positive(lambda, "lambda")?;
                let ln = lambda.ln();
                Interaction::from_fns(Alphabet::numbered(g + 1)?, d, |a| -(a as f64) * ln, |a, b| hard(a.abs_diff(b) <= 1))
            }
        }
    }
}

fn positive(v: f64, name: &str) -> Result<(), GibbsError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

fn colour_labels(k: usize) -> Result<Alphabet, GibbsError> {
    Ok(Alphabet::new((1..=k).map(|i| i.to_string()))?)
}

/// Registry lookup by name.
pub fn model(name: &str, params: &BTreeMap<String, f64>) -> Result<Interaction, GibbsError> {
    Model::from_params(name, params)?.build()
}
