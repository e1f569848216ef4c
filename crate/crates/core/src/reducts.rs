//! The five reducts of the rational order, evaluated directly on reals.
//!
//! Each relation is the literal formula over `<`: betweenness `B`, circular
//! order `K`, and separation `S` (built from `K`). Because all three are
//! defined from `<`, the structure induced on a tuple of distinct reals
//! depends only on the order pattern of that tuple.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finstruct::{FinStructure, Signature};

/// Cameron's catalog of highly homogeneous reducts of `(Q, <)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductKind {
    PureSet,
    Order,
    Betweenness,
    #[serde(rename = "circular")]
    CircularOrder,
    Separation,
}

impl ReductKind {
    pub const ALL: [ReductKind; 5] = [
        ReductKind::PureSet,
        ReductKind::Order,
        ReductKind::Betweenness,
        ReductKind::CircularOrder,
        ReductKind::Separation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReductKind::PureSet => "pure-set",
            ReductKind::Order => "order",
            ReductKind::Betweenness => "betweenness",
            ReductKind::CircularOrder => "circular",
            ReductKind::Separation => "separation",
        }
    }

    /// Relation symbol name and arity; `None` for the pure set.
    pub fn symbol(self) -> Option<(&'static str, usize)> {
        match self {
            ReductKind::PureSet => None,
            ReductKind::Order => Some(("lt", 2)),
            ReductKind::Betweenness => Some(("B", 3)),
            ReductKind::CircularOrder => Some(("K", 3)),
            ReductKind::Separation => Some(("S", 4)),
        }
    }

    pub fn signature(self) -> Signature {
        match self.symbol() {
            None => Signature::empty(),
            Some(sym) => Signature::new([sym]).expect("catalog signature is valid"),
        }
    }

    /// Evaluates the reduct's relation on reals, literally. Tuples with repeated
    /// entries fail every strict inequality and so never satisfy the formula.
    pub fn holds(self, x: &[f64]) -> bool {
        match self {
            ReductKind::PureSet => false,
            ReductKind::Order => x[0] < x[1],
            ReductKind::Betweenness => betweenness_formula(x[0], x[1], x[2]),
            ReductKind::CircularOrder => circular_formula(x[0], x[1], x[2]),
            ReductKind::Separation => separation_formula(x[0], x[1], x[2], x[3]),
        }
    }
}

impl fmt::Display for ReductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReductKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReductKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownStructure(s.to_string()))
    }
}

pub(crate) fn betweenness_formula(a: f64, b: f64, c: f64) -> bool {
    (a < b && b < c) || (c < b && b < a)
}

pub(crate) fn circular_formula(a: f64, b: f64, c: f64) -> bool {
    (a < b && b < c) || (b < c && c < a) || (c < a && a < b)
}

pub(crate) fn separation_formula(a: f64, b: f64, c: f64, d: f64) -> bool {
    let k = circular_formula;
    (k(a, b, c) && k(b, c, d) && k(c, d, a)) || (k(d, c, b) && k(c, b, a) && k(b, a, d))
}

fn require_distinct(xs: &[f64]) -> Result<()> {
    for (i, &x) in xs.iter().enumerate() {
        if xs[..i].contains(&x) {
            return Err(Error::RepeatedArgument(x));
        }
    }
    Ok(())
}

/// `B(a, b, c)`: `b` lies strictly between `a` and `c`.
pub fn betweenness(a: f64, b: f64, c: f64) -> Result<bool> {
    require_distinct(&[a, b, c])?;
    Ok(betweenness_formula(a, b, c))
}

/// `K(a, b, c)`: `a, b, c` appear in this cyclic order.
pub fn circular(a: f64, b: f64, c: f64) -> Result<bool> {
    require_distinct(&[a, b, c])?;
    Ok(circular_formula(a, b, c))
}

/// `S(a, b, c, d)`: the pairs `{a, c}` and `{b, d}` separate each other on the circle.
pub fn separation(a: f64, b: f64, c: f64, d: f64) -> Result<bool> {
    require_distinct(&[a, b, c, d])?;
    Ok(separation_formula(a, b, c, d))
}

/// The structure induced on `{0..t.len()-1}` by the reduct's formula.
pub fn induce_reduct(kind: ReductKind, t: &[f64]) -> Result<FinStructure> {
    require_distinct(t)?;
    Ok(induce_reduct_unchecked(kind, Arc::new(kind.signature()), t))
}

pub(crate) fn induce_reduct_unchecked(
    kind: ReductKind,
    sig: Arc<Signature>,
    t: &[f64],
) -> FinStructure {
    let mut buf = Vec::with_capacity(4);
    FinStructure::from_predicate(sig, t.len(), |_, idx| {
        buf.clear();
        buf.extend(idx.iter().map(|&i| t[i]));
        kind.holds(&buf)
    })
}
