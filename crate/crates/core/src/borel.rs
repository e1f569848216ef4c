//! Borel structures on the reals and the prefix samplers they induce.
//!
//! A [`BorelStructure`] interprets each relation symbol as a deterministic
//! predicate on real tuples. Drawing reals `t_0, t_1, ...` i.i.d. from a
//! continuous measure `m` and reading off the structure they induce on their
//! indices gives a random structure on `N` whose law is invariant under
//! relabeling. [`sample_prefix`] returns its first `n` elements.
//!
//! The catalog is closed. Each entry strongly witnesses the theory of its
//! countable limit: under any nondegenerate continuous `m`, i.i.d. reals are
//! almost surely distinct and dense in the support, so the order-defined
//! reducts realize every one-point extension of their Fraïssé theory with
//! positive probability. `unary-split` is the exception on purpose: its two
//! classes have masses `m((-∞,0))` and `m([0,∞))`, which is what makes its
//! invariant measures depend on `m`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::finstruct::{FinStructure, Permutation, Signature};
use crate::measures::SampleableMeasure;
use crate::reducts::ReductKind;

/// Attempts allowed to redraw one coordinate that ties an earlier one.
pub const TIE_RESAMPLE_CAP: usize = 1000;

/// Deterministic predicate on a tuple of reals whose length is the symbol's arity.
pub type RealPredicate = fn(&[f64]) -> bool;

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 6] = [
    "pure-set",
    "order",
    "betweenness",
    "circular",
    "separation",
    "unary-split",
];

#[derive(Clone)]
pub struct BorelStructure {
    name: String,
    sig: Arc<Signature>,
    predicates: Vec<RealPredicate>,
}

impl fmt::Debug for BorelStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BorelStructure")
            .field("name", &self.name)
            .field("sig", &self.sig)
            .finish_non_exhaustive()
    }
}

impl BorelStructure {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    /// Evaluates relation `r` on reals.
    pub fn holds(&self, r: usize, x: &[f64]) -> bool {
        (self.predicates[r])(x)
    }

    /// The reduct this structure realizes, if it is one of the five.
    pub fn reduct_kind(&self) -> Option<ReductKind> {
        self.name.parse().ok()
    }
}

fn order_pred(x: &[f64]) -> bool {
    ReductKind::Order.holds(x)
}

fn betweenness_pred(x: &[f64]) -> bool {
    ReductKind::Betweenness.holds(x)
}

fn circular_pred(x: &[f64]) -> bool {
    ReductKind::CircularOrder.holds(x)
}

fn separation_pred(x: &[f64]) -> bool {
    ReductKind::Separation.holds(x)
}

fn nonnegative_pred(x: &[f64]) -> bool {
    x[0] >= 0.0
}

/// The Borel structure realizing a reduct of the rational order.
pub fn reduct_structure(kind: ReductKind) -> BorelStructure {
    let predicates: Vec<RealPredicate> = match kind {
        ReductKind::PureSet => vec![],
        ReductKind::Order => vec![order_pred],
        ReductKind::Betweenness => vec![betweenness_pred],
        ReductKind::CircularOrder => vec![circular_pred],
        ReductKind::Separation => vec![separation_pred],
    };
    BorelStructure {
        name: kind.name().to_string(),
        sig: Arc::new(kind.signature()),
        predicates,
    }
}

/// One unary symbol `R`, with `R(x) ⟺ x ≥ 0`.
pub fn unary_split() -> BorelStructure {
    BorelStructure {
        name: "unary-split".to_string(),
        sig: Arc::new(Signature::new([("R", 1)]).expect("valid signature")),
        predicates: vec![nonnegative_pred],
    }
}

pub fn builtin(name: &str) -> Result<BorelStructure> {
    if name == "unary-split" {
        return Ok(unary_split());
    }
    name.parse::<ReductKind>()
        .map(reduct_structure)
        .map_err(|_| Error::UnknownStructure(name.to_string()))
}

fn check_distinct(t: &[f64]) -> Result<()> {
    let mut sorted = t.to_vec();
    sorted.sort_by(f64::total_cmp);
    match sorted.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(Error::RepeatedArgument(w[0])),
        None => Ok(()),
    }
}

/// The structure induced on `{0..t.len()-1}`: `R(n_1..n_j)` iff `P ⊨ R(t_{n_1}..t_{n_j})`.
pub fn induce(p: &BorelStructure, t: &[f64]) -> Result<FinStructure> {
    check_distinct(t)?;
    Ok(induce_unchecked(p, t))
}

fn induce_unchecked(p: &BorelStructure, t: &[f64]) -> FinStructure {
    let mut buf = Vec::with_capacity(p.sig.max_arity());
    FinStructure::from_predicate(Arc::clone(&p.sig), t.len(), |r, idx| {
        buf.clear();
        buf.extend(idx.iter().map(|&i| t[i]));
        p.holds(r, &buf)
    })
}

/// `σ·t`, with `(σ·t)_i = t_{σ⁻¹(i)}`; then `induce(P, σ·t) = σ·induce(P, t)`.
pub fn permute_reals(t: &[f64], sigma: &Permutation) -> Result<Vec<f64>> {
    if sigma.len() != t.len() {
        return Err(Error::SizeMismatch {
            expected: t.len(),
            actual: sigma.len(),
        });
    }
    let mut out = vec![0.0; t.len()];
    for (i, &x) in t.iter().enumerate() {
        out[sigma.image(i)] = x;
    }
    Ok(out)
}

/// Draws `n` i.i.d. reals from `m`, redrawing exact ties.
pub fn sample_reals(m: &SampleableMeasure, n: usize, rng: &mut dyn RngCore) -> Result<Vec<f64>> {
    let mut t: Vec<f64> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut attempts = 0;
        let x = loop {
            let x = m.sample(rng);
            if !t.contains(&x) {
                break x;
            }
            attempts += 1;
            if attempts >= TIE_RESAMPLE_CAP {
                return Err(Error::TieResampleExceeded(TIE_RESAMPLE_CAP));
            }
        };
        t.push(x);
    }
    Ok(t)
}

/// One draw from the `n`-element marginal of the invariant measure induced by `(P, m)`.
pub fn sample_prefix(
    p: &BorelStructure,
    m: &SampleableMeasure,
    n: usize,
    rng: &mut dyn RngCore,
) -> Result<FinStructure> {
    let t = sample_reals(m, n, rng)?;
    Ok(induce_unchecked(p, &t))
}

/// Symmetric irreflexive graph with each unordered pair an edge independently with probability `p`.
pub fn er_sample(n: usize, p: f64, rng: &mut dyn RngCore) -> Result<FinStructure> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    let mut g = FinStructure::empty(er_signature(), n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < p {
                g.insert_unchecked(0, vec![a, b]);
                g.insert_unchecked(0, vec![b, a]);
            }
        }
    }
    Ok(g)
}

fn er_signature() -> Arc<Signature> {
    Arc::new(Signature::new([("E", 2)]).expect("valid signature"))
}

/// Anything that can draw finite prefixes of a random structure on `N`.
pub trait PrefixSampler: Sync {
    fn label(&self) -> String;

    fn sample_prefix(&self, n: usize, rng: &mut dyn RngCore) -> Result<FinStructure>;
}

/// The sampler for the measure induced by a Borel structure and a measure on the reals.
#[derive(Debug, Clone)]
pub struct PushforwardSampler {
    pub structure: BorelStructure,
    pub measure: SampleableMeasure,
}

impl PushforwardSampler {
    pub fn new(structure: BorelStructure, measure: SampleableMeasure) -> Self {
        Self { structure, measure }
    }
}

impl PrefixSampler for PushforwardSampler {
    fn label(&self) -> String {
        format!("{} / {}", self.structure.name, self.measure)
    }

    fn sample_prefix(&self, n: usize, rng: &mut dyn RngCore) -> Result<FinStructure> {
        sample_prefix(&self.structure, &self.measure, n, rng)
    }
}

/// `G(N, p)`.
#[derive(Debug, Clone, Copy)]
pub struct ErdosRenyi {
    p: f64,
}

impl ErdosRenyi {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

impl PrefixSampler for ErdosRenyi {
    fn label(&self) -> String {
        format!("erdos-renyi(p={})", self.p)
    }

    fn sample_prefix(&self, n: usize, rng: &mut dyn RngCore) -> Result<FinStructure> {
        er_sample(n, self.p, rng)
    }
}

/// Number of edges (unordered pairs) of a symmetric graph.
pub fn edge_count(g: &FinStructure) -> usize {
    g.relation(0).iter().filter(|t| t[0] < t[1]).count()
}

/// Relations as a JSON object `{name: [[i, j, ...], ...]}`.
pub fn relations_json(m: &FinStructure) -> Value {
    let map: BTreeMap<&str, Vec<&Vec<usize>>> = m
        .signature()
        .relations()
        .iter()
        .enumerate()
        .map(|(r, sym)| (sym.name.as_str(), m.relation(r).iter().collect()))
        .collect();
    json!(map)
}

/// `{"structure": name, "n": n, "seed": s, "relations": {...}}`.
pub fn sample_json(name: &str, m: &FinStructure, seed: u64) -> Value {
    json!({
        "structure": name,
        "n": m.size(),
        "seed": seed,
        "relations": relations_json(m),
    })
}
