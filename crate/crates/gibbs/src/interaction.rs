//! Interactions: finite vertex energies and per-axis edge energies that may
//! be `+∞`. An infinite edge energy is a hard constraint; it never reaches
//! an exponential.

use nnsft_core::sweep::LocalWeights;
use nnsft_core::{Alphabet, Letter, Nnsft, Pattern, Site};

use crate::error::GibbsError;

/// An energy value: a real number or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Energy {
    Finite(f64),
    Infinite,
}

impl Energy {
    pub fn is_finite(self) -> bool {
        matches!(self, Energy::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Energy::Finite(v) => Some(v),
            Energy::Infinite => None,
        }
    }

    /// `exp(-self)`, with `exp(-∞) = 0` taken literally.
    pub fn boltzmann(self) -> f64 {
        self.finite().map_or(0.0, |v| (-v).exp())
    }
}

impl std::ops::Add for Energy {
    type Output = Energy;
    fn add(self, rhs: Energy) -> Energy {
        match (self, rhs) {
            (Energy::Finite(a), Energy::Finite(b)) => Energy::Finite(a + b),
            _ => Energy::Infinite,
        }
    }
}

/// A nearest-neighbour interaction `Φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Interaction {
    alphabet: Alphabet,
    dim: usize,
    vertex: Vec<f64>,
    /// `edges[axis][a * k + b]`: energy of `a` at `p` and `b` at `p + e_axis`.
    edges: Vec<Vec<Energy>>,
    sft: Nnsft,
}

impl Interaction {
    pub fn new(alphabet: Alphabet, dim: usize, vertex: Vec<f64>, edges: Vec<Vec<Energy>>) -> Result<Interaction, GibbsError> {
        let k = alphabet.size();
        if dim == 0 {
            return Err(GibbsError::InvalidParameter("dimension must be positive".into()));
        }
        if vertex.len() != k {
            return Err(GibbsError::InvalidParameter(format!("{} vertex weights for {k} letters", vertex.len())));
        }
        if let Some(a) = vertex.iter().position(|v| !v.is_finite()) {
            return Err(GibbsError::InfiniteVertex(a));
        }
        if edges.len() != dim || edges.iter().any(|e| e.len() != k * k) {
            return Err(GibbsError::InvalidParameter(format!("expected {dim} edge tables of {} entries", k * k)));
        }
        if edges.iter().flatten().any(|e| matches!(e, Energy::Finite(v) if !v.is_finite())) {
            return Err(GibbsError::InvalidParameter("edge energies must be real or +inf".into()));
        }
        let sft = Nnsft::from_fn(alphabet.clone(), dim, |axis, a, b| edges[axis][a as usize * k + b as usize].is_finite())?;
        Ok(Interaction { alphabet, dim, vertex, edges, sft })
    }

    /// Builds an interaction from closures, the same edge rule on every axis.
    pub fn from_fns(
        alphabet: Alphabet,
        dim: usize,
        vertex: impl Fn(Letter) -> f64,
        edge: impl Fn(Letter, Letter) -> Energy,
    ) -> Result<Interaction, GibbsError> {
        let k = alphabet.size();
        let v = (0..k).map(|a| vertex(a as Letter)).collect();
        let table: Vec<Energy> = (0..k * k).map(|i| edge((i / k) as Letter, (i % k) as Letter)).collect();
        Interaction::new(alphabet, dim, v, vec![table; dim])
    }

    /// The zero interaction on an SFT: every allowed pattern has energy 0.
    pub fn uniform(x: &Nnsft) -> Interaction {
        let k = x.alphabet_size();
        let edges = (0..x.dim())
            .map(|axis| {
                (0..k * k)
                    .map(|i| if x.allows(axis, (i / k) as Letter, (i % k) as Letter) { Energy::Finite(0.0) } else { Energy::Infinite })
                    .collect()
            })
            .collect();
        Interaction::new(x.alphabet().clone(), x.dim(), vec![0.0; k], edges).expect("well-formed uniform interaction")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.size()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex(&self, a: Letter) -> f64 {
        self.vertex[a as usize]
    }

    pub fn edge(&self, axis: usize, a: Letter, b: Letter) -> Energy {
        self.edges[axis][a as usize * self.alphabet.size() + b as usize]
    }

    /// The n.n. SFT of pairs with finite edge energy.
    pub fn underlying_sft(&self) -> &Nnsft {
        &self.sft
    }

    /// `U_S(w)`: vertex energies on the shape plus edges with both ends inside.
    pub fn energy(&self, w: &Pattern) -> Energy {
        let mut total = Energy::Finite(w.iter().map(|(_, a)| self.vertex(a)).sum());
        for (p, a) in w.iter() {
            for axis in 0..self.dim {
                let Ok(q) = p.step(axis, 1) else { continue };
                if let Some(b) = w.get(&q) {
                    total = total + self.edge(axis, a, b);
                }
            }
        }
        total
    }

    /// Energy of a fill `w` of a region next to a boundary pattern: vertex
    /// terms on the region and every edge with at least one end in the region.
    /// Edges between two boundary sites are not counted; they cancel in every
    /// conditional probability.
    pub fn energy_with_boundary(&self, w: &Pattern, boundary: &Pattern) -> Energy {
        let mut total = self.energy(w);
        for (p, a) in w.iter() {
            for axis in 0..self.dim {
                for sign in [1, -1] {
                    let Ok(q) = p.step(axis, sign) else { continue };
                    if let Some(b) = boundary.get(&q) {
                        total = total + if sign > 0 { self.edge(axis, a, b) } else { self.edge(axis, b, a) };
                    }
                }
            }
        }
        total
    }

    /// `A_Φ(x) = -Φ(x(0)) - Σ_i Φ(x(0), x(e_i))` for a point given by a letter
    /// lookup; `None` when an edge at the origin is forbidden.
    pub fn site_functional(&self, letter_at: impl Fn(&Site) -> Letter) -> Option<f64> {
        let a = letter_at(&Site::origin(self.dim));
        let mut total = -self.vertex(a);
        for axis in 0..self.dim {
            let b = letter_at(&Site::unit(self.dim, axis, 1));
            total -= self.edge(axis, a, b).finite()?;
        }
        Some(total)
    }

    /// Log-weights (`-Φ`) for the sweep engine.
    pub fn local_weights(&self) -> LocalWeights {
        let mut w = LocalWeights::uniform(&self.sft);
        w.vertex = self.vertex.iter().map(|v| -v).collect();
        w.edge = self.edges.iter().map(|t| t.iter().map(|e| e.finite().map_or(0.0, |v| -v)).collect()).collect();
        w
    }
}
