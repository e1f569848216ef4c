//! Finite relational structures on `{0..n-1}` and the logic action of `S_n`.
//!
//! A [`FinStructure`] is the finite stand-in for a countable structure with
//! underlying set `N`: it is what a sampler actually produces when asked for
//! an `n`-element prefix. Permutations act by relabeling elements, so orbits
//! of the action are exactly isomorphism classes.

mod iso;
mod text;

pub use iso::{
    are_isomorphic, automorphism_group, canonical_structure, is_highly_homogeneous_finite,
    labeled_type, unlabeled_type, CanonicalStructure, TypeId, BRUTE_FORCE_BOUND,
};
pub use text::{parse_structure, write_structure};

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A relation symbol with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
}

/// A finite relational signature: an ordered list of distinct relation symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Signature {
    relations: Vec<RelationSymbol>,
}

impl Signature {
    pub fn new<S: Into<String>>(relations: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let relations: Vec<RelationSymbol> = relations
            .into_iter()
            .map(|(name, arity)| RelationSymbol {
                name: name.into(),
                arity,
            })
            .collect();
        let mut seen = BTreeSet::new();
        for rel in &relations {
            if rel.arity == 0 {
                return Err(Error::InvalidSignature(format!(
                    "relation `{}` has arity 0",
                    rel.name
                )));
            }
            if !is_identifier(&rel.name) {
                return Err(Error::InvalidSignature(format!(
                    "`{}` is not an identifier",
                    rel.name
                )));
            }
            if !seen.insert(rel.name.as_str()) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate relation `{}`",
                    rel.name
                )));
            }
        }
        Ok(Self { relations })
    }

    /// The empty signature (pure set).
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn relations(&self) -> &[RelationSymbol] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    pub fn max_arity(&self) -> usize {
        self.relations.iter().map(|r| r.arity).max().unwrap_or(0)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// A finite labeled structure with underlying set `{0..size-1}`.
///
/// Tuple sets are kept sorted so that encodings are reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinStructure {
    sig: Arc<Signature>,
    size: usize,
    relations: Vec<BTreeSet<Vec<usize>>>,
}

impl FinStructure {
    /// A structure in which every relation is empty.
    pub fn empty(sig: Arc<Signature>, size: usize) -> Self {
        let relations = vec![BTreeSet::new(); sig.len()];
        Self {
            sig,
            size,
            relations,
        }
    }

    /// Builds a structure from one tuple list per relation symbol, in signature order.
    pub fn new(sig: Arc<Signature>, size: usize, relations: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if relations.len() != sig.len() {
            return Err(Error::InvalidStructure(format!(
                "expected {} relations, got {}",
                sig.len(),
                relations.len()
            )));
        }
        let mut out = Self::empty(sig, size);
        for (r, tuples) in relations.into_iter().enumerate() {
            for t in tuples {
                out.insert(r, t)?;
            }
        }
        Ok(out)
    }

    /// Builds the structure whose relation `r` holds on an index tuple exactly
    /// when `holds(r, tuple)` does, over every tuple in `{0..size-1}^arity`.
    pub fn from_predicate(
        sig: Arc<Signature>,
        size: usize,
        mut holds: impl FnMut(usize, &[usize]) -> bool,
    ) -> Self {
        use itertools::Itertools;
        let mut out = Self::empty(sig, size);
        for r in 0..out.sig.len() {
            let arity = out.sig.relations()[r].arity;
            for t in (0..arity).map(|_| 0..size).multi_cartesian_product() {
                if holds(r, &t) {
                    out.relations[r].insert(t);
                }
            }
        }
        out
    }

    /// Adds a tuple to relation `r`.
    pub fn insert(&mut self, r: usize, tuple: Vec<usize>) -> Result<()> {
        let symbol = self
            .sig
            .relations()
            .get(r)
            .ok_or_else(|| Error::InvalidStructure(format!("no relation with index {r}")))?;
        if tuple.len() != symbol.arity {
            return Err(Error::InvalidStructure(format!(
                "relation `{}` has arity {}, tuple {:?} has length {}",
                symbol.name,
                symbol.arity,
                tuple,
                tuple.len()
            )));
        }
        if let Some(&bad) = tuple.iter().find(|&&e| e >= self.size) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                size: self.size,
            });
        }
        self.relations[r].insert(tuple);
        Ok(())
    }

    // Callers guarantee arity and range.
    pub(crate) fn insert_unchecked(&mut self, r: usize, tuple: Vec<usize>) {
        debug_assert!(tuple.iter().all(|&e| e < self.size));
        self.relations[r].insert(tuple);
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Tuples of relation `r`, sorted.
    pub fn relation(&self, r: usize) -> &BTreeSet<Vec<usize>> {
        &self.relations[r]
    }

    pub fn relation_by_name(&self, name: &str) -> Option<&BTreeSet<Vec<usize>>> {
        self.sig.index_of(name).map(|r| &self.relations[r])
    }

    pub fn holds(&self, r: usize, tuple: &[usize]) -> bool {
        self.relations[r].contains(tuple)
    }

    /// The logic action: `N = σ·M` with `R^N(s) ⟺ R^M(σ⁻¹(s))`.
    pub fn apply_permutation(&self, sigma: &Permutation) -> Result<FinStructure> {
        if sigma.len() != self.size {
            return Err(Error::SizeMismatch {
                expected: self.size,
                actual: sigma.len(),
            });
        }
        Ok(self.apply_unchecked(sigma))
    }

    pub(crate) fn apply_unchecked(&self, sigma: &Permutation) -> FinStructure {
        let relations = self
            .relations
            .iter()
            .map(|rel| rel.iter().map(|t| sigma.map_tuple(t)).collect())
            .collect();
        FinStructure {
            sig: Arc::clone(&self.sig),
            size: self.size,
            relations,
        }
    }

    /// True when `σ·M = M`, without materializing `σ·M`.
    pub(crate) fn is_fixed_by(&self, sigma: &Permutation) -> bool {
        self.relations
            .iter()
            .all(|rel| rel.iter().all(|t| rel.contains(&sigma.map_tuple(t))))
    }

    /// The substructure on `indices`, relabeled so that `indices[i]` becomes `i`.
    pub fn induced_substructure(&self, indices: &[usize]) -> Result<FinStructure> {
        let mut position = vec![usize::MAX; self.size];
        for (i, &e) in indices.iter().enumerate() {
            if e >= self.size {
                return Err(Error::IndexOutOfRange {
                    index: e,
                    size: self.size,
                });
            }
            if position[e] != usize::MAX {
                return Err(Error::RepeatedIndex(e));
            }
            position[e] = i;
        }
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .filter(|t| t.iter().all(|&e| position[e] != usize::MAX))
                    .map(|t| t.iter().map(|&e| position[e]).collect())
                    .collect()
            })
            .collect();
        Ok(FinStructure {
            sig: Arc::clone(&self.sig),
            size: indices.len(),
            relations,
        })
    }

    /// Number of tuples across all relations.
    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(BTreeSet::len).sum()
    }
}

impl fmt::Display for FinStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_structure(self))
    }
}

/// A bijection on `{0..n-1}`, stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &v in &map {
            if v >= map.len() || seen[v] {
                return Err(Error::NotAPermutation(map));
            }
            seen[v] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    pub(crate) fn from_vec_unchecked(map: Vec<usize>) -> Self {
        Self { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Self { map: inv }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Permutation) -> Result<Self> {
        if self.len() != first.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                actual: first.len(),
            });
        }
        Ok(Self {
            map: first.map.iter().map(|&i| self.map[i]).collect(),
        })
    }

    pub fn map_tuple(&self, t: &[usize]) -> Vec<usize> {
        t.iter().map(|&e| self.map[e]).collect()
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        use itertools::Itertools;
        (0..n).permutations(n).map(Permutation::from_vec_unchecked)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}
