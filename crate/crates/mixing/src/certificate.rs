//! Mixing certificates and the implication chain between them.

use std::fmt;

use nnsft_core::{Letter, Nnsft};
use serde::{Deserialize, Serialize};

use crate::error::MixingError;
use crate::local::{check_ssf, find_safe_symbols, smallest_fillable};

/// A combinatorial mixing property of a shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "property", rename_all = "snake_case")]
pub enum Property {
    SafeSymbol { letter: Letter },
    Ssf,
    NFillable { n: u32 },
    StrongIrreducible { gap: u32 },
    Tssm { gap: u32 },
    TopMixing1D,
}

impl Property {
    /// The gap carried by the property, if any.
    pub fn gap(&self) -> Option<u32> {
        match self {
            Property::StrongIrreducible { gap } | Property::Tssm { gap } => Some(*gap),
            _ => None,
        }
    }

    /// Properties of the same kind differ at most in their parameter.
    fn same_kind(&self, other: &Property) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::SafeSymbol { letter } => write!(f, "safe symbol {letter}"),
            Property::Ssf => write!(f, "SSF"),
            Property::NFillable { n } => write!(f, "{n}-fillable"),
            Property::StrongIrreducible { gap } => write!(f, "strongly irreducible, gap {gap}"),
            Property::Tssm { gap } => write!(f, "TSSM gap {gap}"),
            Property::TopMixing1D => write!(f, "topologically mixing (1D)"),
        }
    }
}

/// Where a certificate comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "provenance", rename_all = "snake_case")]
pub enum Provenance {
    ExhaustiveCheck,
    Implication { from: Property },
    UserAsserted,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::ExhaustiveCheck => write!(f, "exhaustive check"),
            Provenance::Implication { from } => write!(f, "via {from}"),
            Provenance::UserAsserted => write!(f, "user asserted"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MixingCertificate {
    pub property: Property,
    pub provenance: Provenance,
}

impl MixingCertificate {
    pub fn checked(property: Property) -> MixingCertificate {
        MixingCertificate { property, provenance: Provenance::ExhaustiveCheck }
    }

    pub fn implied(property: Property, from: Property) -> MixingCertificate {
        MixingCertificate { property, provenance: Provenance::Implication { from } }
    }

    pub fn asserted(property: Property) -> MixingCertificate {
        MixingCertificate { property, provenance: Provenance::UserAsserted }
    }
}

impl fmt::Display for MixingCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.property, self.provenance)
    }
}

/// Largest boundary enumeration the chain attempts for fillability.
pub const CHAIN_FILL_LIMIT: u64 = 1 << 22;

/// Runs the cheap checks and closes the results under the implications
/// safe symbol ⟹ SSF ⟹ TSSM(2), N-fillable ⟹ strongly irreducible with gap
/// 2(N+1), TSSM(g) ⟹ strongly irreducible with gap g, and in one dimension
/// mixing ⟺ TSSM with gap equal to the primitivity exponent.
///
/// Fillability is only tried when SSF fails, for N = 2 in dimension two and
/// above, and only while the boundary enumeration stays under
/// [`CHAIN_FILL_LIMIT`]. TSSM is never claimed in d ≥ 2 without SSF.
pub fn certificate_chain(x: &Nnsft) -> Result<Vec<MixingCertificate>, MixingError> {
    let mut out: Vec<MixingCertificate> = Vec::new();
    let safe = find_safe_symbols(x);
    for &a in &safe {
        out.push(MixingCertificate::checked(Property::SafeSymbol { letter: a }));
    }
    let ssf = check_ssf(x);
    if ssf {
        let ssf_cert = match safe.first() {
            Some(&a) => MixingCertificate::implied(Property::Ssf, Property::SafeSymbol { letter: a }),
            None => MixingCertificate::checked(Property::Ssf),
        };
        out.push(ssf_cert);
        out.push(MixingCertificate::implied(Property::Tssm { gap: 2 }, Property::Ssf));
        out.push(MixingCertificate::implied(Property::StrongIrreducible { gap: 2 }, Property::Tssm { gap: 2 }));
    } else if x.dim() >= 2 {
        if let Some(n) = smallest_fillable(x, 2, CHAIN_FILL_LIMIT)? {
            out.push(MixingCertificate::checked(Property::NFillable { n }));
            out.push(MixingCertificate::implied(
                Property::StrongIrreducible { gap: 2 * (n + 1) },
                Property::NFillable { n },
            ));
        }
    }
    if x.dim() == 1 {
        let w = nnsft_core::Witness1D::from_sft(x)?;
        if let Some(e) = nnsft_core::onedim::primitivity_exponent(&w)? {
            let gap = e as u32;
            out.push(MixingCertificate::checked(Property::TopMixing1D));
            out.push(MixingCertificate::implied(Property::Tssm { gap }, Property::TopMixing1D));
            out.push(MixingCertificate::implied(Property::StrongIrreducible { gap }, Property::Tssm { gap }));
        }
    }
    Ok(sharpest(out))
}

/// Keeps one certificate per property kind for gapped properties (the
/// smallest gap, first provenance) and drops exact duplicates otherwise.
fn sharpest(certs: Vec<MixingCertificate>) -> Vec<MixingCertificate> {
    let mut out: Vec<MixingCertificate> = Vec::new();
    for c in certs {
        if c.property.gap().is_some() {
            if let Some(i) = out.iter().position(|o| o.property.same_kind(&c.property)) {
                if c.property.gap() < out[i].property.gap() {
                    out[i] = c;
                }
                continue;
            }
        } else if out.iter().any(|o| o.property == c.property) {
            continue;
        }
        out.push(c);
    }
    out
}

/// The smallest certified TSSM gap, if any.
pub fn tssm_gap(certs: &[MixingCertificate]) -> Option<u32> {
    certs.iter().filter_map(|c| match c.property {
        Property::Tssm { gap } => Some(gap),
        _ => None,
    }).min()
}

/// The smallest certified strong-irreducibility gap, if any.
pub fn si_gap(certs: &[MixingCertificate]) -> Option<u32> {
    certs.iter().filter_map(|c| match c.property {
        Property::StrongIrreducible { gap } => Some(gap),
        _ => None,
    }).min()
}
