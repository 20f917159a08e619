//! Alphabets and finite patterns.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::SftError;
use crate::lattice::{Shape, Site};

/// Dense letter index.
pub type Letter = u8;

/// Largest supported alphabet; candidate sets in the solver are `u64` masks.
pub const MAX_ALPHABET: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(labels: I) -> Result<Alphabet, SftError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_ALPHABET {
            return Err(SftError::AlphabetSize { got: labels.len(), max: MAX_ALPHABET });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(SftError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Alphabet { labels })
    }

    /// Letters labelled `0..size`.
    pub fn numbered(size: usize) -> Result<Alphabet, SftError> {
        Alphabet::new((0..size).map(|i| i.to_string()))
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: Letter) -> &str {
        &self.labels[a as usize]
    }

    pub fn index_of(&self, label: &str) -> Result<Letter, SftError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as Letter)
            .ok_or_else(|| SftError::UnknownLabel(label.to_string()))
    }

    /// Mask with one bit per letter.
    pub fn full_mask(&self) -> u64 {
        full_mask(self.size())
    }
}

pub fn full_mask(size: usize) -> u64 {
    if size >= 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    }
}

/// A map from the sites of a finite shape to letters.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    shape: Shape,
    values: Vec<Letter>,
}

impl Pattern {
    pub fn new(shape: Shape, values: Vec<Letter>) -> Result<Pattern, SftError> {
        if shape.len() != values.len() {
            return Err(SftError::PatternLength { sites: shape.len(), values: values.len() });
        }
        Ok(Pattern { shape, values })
    }

    pub fn empty(dim: usize) -> Pattern {
        Pattern { shape: Shape::empty(dim), values: Vec::new() }
    }

    /// Builds a pattern from site/letter pairs; repeated sites must agree.
    pub fn from_pairs<I: IntoIterator<Item = (Site, Letter)>>(dim: usize, pairs: I) -> Result<Pattern, SftError> {
        let mut v: Vec<(Site, Letter)> = pairs.into_iter().collect();
        if let Some((bad, _)) = v.iter().find(|(s, _)| s.dim() != dim) {
            return Err(crate::error::LatticeError::DimensionMismatch(dim, bad.dim()).into());
        }
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut sites = Vec::with_capacity(v.len());
        let mut values = Vec::with_capacity(v.len());
        for (s, a) in v {
            if sites.last() == Some(&s) {
                if *values.last().unwrap() != a {
                    return Err(SftError::ConflictingSite(s.to_string()));
                }
                continue;
            }
            sites.push(s);
            values.push(a);
        }
        let shape = Shape::from_sites(dim, sites)?;
        Ok(Pattern { shape, values })
    }

    /// Constant pattern on a shape.
    pub fn constant(shape: Shape, a: Letter) -> Pattern {
        let values = vec![a; shape.len()];
        Pattern { shape, values }
    }

    pub fn single(site: Site, a: Letter) -> Pattern {
        Pattern { shape: Shape::singleton(site), values: vec![a] }
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn values(&self) -> &[Letter] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, s: &Site) -> Option<Letter> {
        self.shape.index_of(s).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Site, Letter)> + '_ {
        self.shape.iter().zip(self.values.iter().copied())
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.values.iter().copied().max()
    }

    /// Restriction to the sites of `keep` that lie in the pattern.
    pub fn restrict(&self, keep: &Shape) -> Pattern {
        let mut sites = Vec::new();
        let mut values = Vec::new();
        for (s, a) in self.iter() {
            if keep.contains(s) {
                sites.push(s.clone());
                values.push(a);
            }
        }
        Pattern { shape: Shape::from_sites(self.dim(), sites).expect("subset of a valid shape"), values }
    }

    /// Drops the sites of `remove`.
    pub fn without(&self, remove: &Shape) -> Pattern {
        let mut sites = Vec::new();
        let mut values = Vec::new();
        for (s, a) in self.iter() {
            if !remove.contains(s) {
                sites.push(s.clone());
                values.push(a);
            }
        }
        Pattern { shape: Shape::from_sites(self.dim(), sites).expect("subset of a valid shape"), values }
    }

    /// Union of two patterns that agree on their common sites.
    pub fn union(&self, other: &Pattern) -> Result<Pattern, SftError> {
        Pattern::from_pairs(
            self.dim(),
            self.iter().map(|(s, a)| (s.clone(), a)).chain(other.iter().map(|(s, a)| (s.clone(), a))),
        )
    }

    pub fn translate(&self, by: &Site) -> Result<Pattern, SftError> {
        Ok(Pattern { shape: self.shape.translate(by)?, values: self.values.clone() })
    }

    /// Translates so that the coordinate-wise minimum corner is the origin.
    pub fn normalized(&self) -> Pattern {
        match self.shape.min_corner() {
            None => self.clone(),
            Some(c) => self.translate(&c.negate()).expect("normalization stays in range"),
        }
    }

    /// Sites where two patterns on the same shape differ.
    pub fn disagreement(&self, other: &Pattern) -> Result<Shape, SftError> {
        if self.shape != other.shape {
            return Err(SftError::Invalid("disagreement set needs patterns on one shape".into()));
        }
        let sites = self
            .iter()
            .zip(other.values.iter())
            .filter(|((_, a), &b)| *a != b)
            .map(|((s, _), _)| s.clone());
        Ok(Shape::from_sites(self.dim(), sites)?)
    }

    /// Renders with alphabet labels, e.g. `{(0,0):1, (1,0):0}`.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> PatternDisplay<'a> {
        PatternDisplay { p: self, alphabet }
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter()).finish()
    }
}

pub struct PatternDisplay<'a> {
    p: &'a Pattern,
    alphabet: &'a Alphabet,
}

impl fmt::Display for PatternDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (s, a)) in self.p.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}:{}", self.alphabet.label(a))?;
        }
        write!(f, "}}")
    }
}
