use std::collections::{BTreeSet, HashSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{FinStructure, Permutation};
use crate::error::{Error, Result};

/// Largest structure size handled by the permutation brute force (8! = 40320).
pub const BRUTE_FORCE_BOUND: usize = 8;

const MAX_CANONICAL_ARITY: usize = 4;

fn check_bound(what: &'static str, value: usize, bound: usize) -> Result<()> {
    if value > bound {
        Err(Error::BoundExceeded { what, value, bound })
    } else {
        Ok(())
    }
}

/// Canonical identifier of a quantifier-free type, i.e. a full atomic diagram.
///
/// Labeled ids encode the diagram at fixed indices; unlabeled ids are the
/// minimum labeled encoding over all relabelings, so they identify
/// isomorphism classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeId {
    labeled: bool,
    bytes: Vec<u8>,
}

impl TypeId {
    pub fn is_labeled(&self) -> bool {
        self.labeled
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// `L:<hex>` or `U:<hex>`.
    pub fn to_hex(&self) -> String {
        format!(
            "{}:{}",
            if self.labeled { "L" } else { "U" },
            hex::encode(&self.bytes)
        )
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let (flag, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("type id `{s}` lacks a flag")))?;
        let labeled = match flag {
            "L" => true,
            "U" => false,
            _ => return Err(Error::Parse(format!("bad type id flag `{flag}`"))),
        };
        let bytes = hex::decode(body).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Self { labeled, bytes })
    }
}

impl fmt::Display for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

fn push_u32(out: &mut Vec<u8>, v: usize) {
    out.extend_from_slice(&(v as u32).to_le_bytes());
}

fn encode<'a>(size: usize, relations: impl Iterator<Item = &'a BTreeSet<Vec<usize>>>) -> Vec<u8> {
    let mut out = Vec::new();
    push_u32(&mut out, size);
    for rel in relations {
        push_u32(&mut out, rel.len());
        for t in rel {
            for &e in t {
                push_u32(&mut out, e);
            }
        }
    }
    out
}

pub fn labeled_type(m: &FinStructure) -> TypeId {
    TypeId {
        labeled: true,
        bytes: encode(m.size, m.relations.iter()),
    }
}

/// Minimum labeled encoding over all `size!` relabelings.
pub fn unlabeled_type(m: &FinStructure) -> Result<TypeId> {
    check_bound("structure size", m.size, BRUTE_FORCE_BOUND)?;
    let bytes = Permutation::all(m.size)
        .map(|sigma| {
            let image = m.apply_unchecked(&sigma);
            encode(image.size, image.relations.iter())
        })
        .min()
        .unwrap_or_else(|| encode(0, m.relations.iter()));
    Ok(TypeId {
        labeled: false,
        bytes,
    })
}

/// Per-element isomorphism invariant: occurrence counts by (relation, position),
/// plus counts of tuples in which the element repeats.
fn element_profiles(m: &FinStructure) -> Vec<Vec<usize>> {
    let width: usize = m.sig.relations().iter().map(|r| r.arity + 1).sum();
    let mut profiles = vec![vec![0; width]; m.size];
    let mut offset = 0;
    for (rel, sym) in m.relations.iter().zip(m.sig.relations()) {
        for t in rel {
            for (pos, &e) in t.iter().enumerate() {
                profiles[e][offset + pos] += 1;
            }
            for (&e, n) in t.iter().counts() {
                if n > 1 {
                    profiles[e][offset + sym.arity] += 1;
                }
            }
        }
        offset += sym.arity + 1;
    }
    profiles
}

/// Whether some relabeling maps `m` onto `n` relation by relation.
///
/// Backtracking over assignments restricted to elements with equal profiles.
pub fn are_isomorphic(m: &FinStructure, n: &FinStructure) -> Result<bool> {
    if m.sig != n.sig {
        return Err(Error::SignatureMismatch);
    }
    if m.size != n.size {
        return Ok(false);
    }
    if m.relations
        .iter()
        .zip(&n.relations)
        .any(|(a, b)| a.len() != b.len())
    {
        return Ok(false);
    }
    check_bound("structure size", m.size, BRUTE_FORCE_BOUND)?;

    let pm = element_profiles(m);
    let pn = element_profiles(n);
    if pm.iter().sorted().ne(pn.iter().sorted()) {
        return Ok(false);
    }

    let mut assignment = vec![usize::MAX; m.size];
    let mut used = vec![false; m.size];
    Ok(extend_assignment(
        m,
        n,
        &pm,
        &pn,
        0,
        &mut assignment,
        &mut used,
    ))
}

fn extend_assignment(
    m: &FinStructure,
    n: &FinStructure,
    pm: &[Vec<usize>],
    pn: &[Vec<usize>],
    next: usize,
    assignment: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if next == m.size {
        let sigma = Permutation::from_vec_unchecked(assignment.clone());
        return m
            .relations
            .iter()
            .zip(&n.relations)
            .all(|(a, b)| a.iter().all(|t| b.contains(&sigma.map_tuple(t))));
    }
    for j in 0..n.size {
        if used[j] || pm[next] != pn[j] {
            continue;
        }
        assignment[next] = j;
        used[j] = true;
        if extend_assignment(m, n, pm, pn, next + 1, assignment, used) {
            return true;
        }
        used[j] = false;
    }
    assignment[next] = usize::MAX;
    false
}

/// All permutations fixing `m`, in lexicographic order (identity first).
pub fn automorphism_group(m: &FinStructure) -> Result<Vec<Permutation>> {
    check_bound("structure size", m.size, BRUTE_FORCE_BOUND)?;
    Ok(Permutation::all(m.size)
        .filter(|sigma| m.is_fixed_by(sigma))
        .collect())
}

/// Orbits of `Aut(M)` acting coordinatewise on `k`-tuples, `1 ≤ k ≤ max_arity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalStructure {
    pub size: usize,
    /// `orbits[k - 1]` holds the orbit relations on `k`-tuples; each orbit is sorted,
    /// and orbits are ordered by their least tuple.
    pub orbits: Vec<Vec<Vec<Vec<usize>>>>,
}

impl CanonicalStructure {
    pub fn orbits_of_arity(&self, k: usize) -> &[Vec<Vec<usize>>] {
        &self.orbits[k - 1]
    }

    pub fn max_arity(&self) -> usize {
        self.orbits.len()
    }
}

pub fn canonical_structure(m: &FinStructure, max_arity: usize) -> Result<CanonicalStructure> {
    check_bound("structure size", m.size, BRUTE_FORCE_BOUND)?;
    check_bound("arity", max_arity, MAX_CANONICAL_ARITY)?;
    let group = automorphism_group(m)?;
    let orbits = (1..=max_arity)
        .map(|k| tuple_orbits(m.size, k, &group))
        .collect();
    Ok(CanonicalStructure {
        size: m.size,
        orbits,
    })
}

fn tuple_orbits(n: usize, k: usize, group: &[Permutation]) -> Vec<Vec<Vec<usize>>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut orbits = Vec::new();
    for t in (0..k).map(|_| 0..n).multi_cartesian_product() {
        if seen.contains(&t) {
            continue;
        }
        let orbit: BTreeSet<Vec<usize>> = group.iter().map(|g| g.map_tuple(&t)).collect();
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit.into_iter().collect());
    }
    orbits
}

/// Whether `Aut(M)` acts transitively on `k`-element subsets.
pub fn is_highly_homogeneous_finite(m: &FinStructure, k: usize) -> Result<bool> {
    check_bound("structure size", m.size, BRUTE_FORCE_BOUND)?;
    check_bound("subset size", k, m.size)?;
    let group = automorphism_group(m)?;
    let start: Vec<usize> = (0..k).collect();
    let orbit: HashSet<Vec<usize>> = group
        .iter()
        .map(|g| {
            let mut image = g.map_tuple(&start);
            image.sort_unstable();
            image
        })
        .collect();
    Ok(orbit.len() == binomial(m.size, k))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::finstruct::Signature;

    fn graph(n: usize, edges: &[(usize, usize)]) -> FinStructure {
        let sig = Arc::new(Signature::new([("E", 2)]).unwrap());
        let tuples = edges
            .iter()
            .flat_map(|&(a, b)| [vec![a, b], vec![b, a]])
            .collect();
        FinStructure::new(sig, n, vec![tuples]).unwrap()
    }

    fn order(n: usize) -> FinStructure {
        let sig = Arc::new(Signature::new([("lt", 2)]).unwrap());
        let tuples = (0..n)
            .tuple_combinations()
            .map(|(a, b)| vec![a, b])
            .collect();
        FinStructure::new(sig, n, vec![tuples]).unwrap()
    }

    fn two_order(forward: bool) -> FinStructure {
        let sig = Arc::new(Signature::new([("lt", 2)]).unwrap());
        let t = if forward { vec![0, 1] } else { vec![1, 0] };
        FinStructure::new(sig, 2, vec![vec![t]]).unwrap()
    }

    #[test]
    fn isomorphism_cases() {
        let m = order(3);
        assert!(are_isomorphic(&m, &m).unwrap());
        assert!(are_isomorphic(&two_order(true), &two_order(false)).unwrap());
        assert!(!are_isomorphic(&graph(2, &[(0, 1)]), &graph(2, &[])).unwrap());
        assert_eq!(
            are_isomorphic(&m, &graph(3, &[])),
            Err(Error::SignatureMismatch)
        );
    }

    #[test]
    fn type_ids() {
        let a = FinStructure::empty(Arc::new(Signature::empty()), 3);
        let b = FinStructure::empty(Arc::new(Signature::empty()), 3);
        assert_eq!(labeled_type(&a), labeled_type(&b));

        let (f, r) = (two_order(true), two_order(false));
        assert_ne!(labeled_type(&f), labeled_type(&r));
        assert_eq!(unlabeled_type(&f).unwrap(), unlabeled_type(&r).unwrap());

        assert_ne!(
            unlabeled_type(&graph(2, &[(0, 1)])).unwrap(),
            unlabeled_type(&graph(2, &[])).unwrap()
        );
        let id = labeled_type(&f);
        assert_eq!(TypeId::from_hex(&id.to_hex()).unwrap(), id);
    }

    #[test]
    fn unlabeled_type_enforces_bound() {
        let m = FinStructure::empty(Arc::new(Signature::empty()), 9);
        assert!(matches!(
            unlabeled_type(&m),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn automorphism_cases() {
        assert_eq!(automorphism_group(&graph(3, &[])).unwrap().len(), 6);
        let rigid = automorphism_group(&order(3)).unwrap();
        assert_eq!(rigid, vec![Permutation::identity(3)]);
        let edge = automorphism_group(&graph(3, &[(0, 1)])).unwrap();
        assert_eq!(
            edge,
            vec![
                Permutation::identity(3),
                Permutation::new(vec![1, 0, 2]).unwrap()
            ]
        );
    }

    #[test]
    fn canonical_structure_cases() {
        let c = canonical_structure(&graph(2, &[]), 1).unwrap();
        assert_eq!(c.orbits_of_arity(1), &[vec![vec![0], vec![1]]]);

        let c = canonical_structure(&order(2), 2).unwrap();
        let orbits = c.orbits_of_arity(2);
        assert_eq!(orbits.len(), 4);
        assert!(orbits.iter().all(|o| o.len() == 1));

        let triangle = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let c = canonical_structure(&triangle, 1).unwrap();
        assert_eq!(c.orbits_of_arity(1).len(), 1);

        assert!(canonical_structure(&order(3), 5).is_err());
    }

    #[test]
    fn high_homogeneity_cases() {
        for k in 0..=4 {
            assert!(is_highly_homogeneous_finite(&graph(4, &[]), k).unwrap());
        }
        assert!(!is_highly_homogeneous_finite(&graph(3, &[(0, 1)]), 2).unwrap());
        let triangle = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(is_highly_homogeneous_finite(&triangle, 2).unwrap());
        assert!(is_highly_homogeneous_finite(&triangle, 4).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(5, 0), 1);
    }
}
