//! Coefficient tables for box-decomposable events, and the reweighted event
//! probability they produce.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, RngCore};

use super::{eval_spade, LambdaPoint, SymCoeffTable};
use crate::error::{Error, Result};
use crate::measures::{product_prob, reweight, Bound, IntervalUnion, SampleableMeasure, Weight};
use crate::montecarlo::run_chunked;

/// Events invariant under permuting coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// Every pair of coordinates has a positive product, i.e. all coordinates
    /// share a strict sign. For `n = 2` this is `{(x, y) : xy > 0}`.
    SameSignPairs,
    /// All coordinates lie in the same part.
    SameCell,
}

impl EventKind {
    pub const ALL: [EventKind; 2] = [EventKind::SameSignPairs, EventKind::SameCell];

    pub fn name(self) -> &'static str {
        match self {
            EventKind::SameSignPairs => "same-sign-pairs",
            EventKind::SameCell => "same-cell",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EventKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EventKind::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown event `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Negative,
    Positive,
}

/// Sign of a part, up to the null set `{0}`.
fn part_sign(part: &IntervalUnion) -> Result<Sign> {
    let at_most_zero =
        |b: Bound| matches!(b, Bound::NegInf) || matches!(b, Bound::Finite(x) if x <= 0.0);
    let at_least_zero =
        |b: Bound| matches!(b, Bound::PosInf) || matches!(b, Bound::Finite(x) if x >= 0.0);
    let ivs = part.intervals();
    if ivs.iter().all(|i| at_most_zero(i.hi())) {
        Ok(Sign::Negative)
    } else if ivs.iter().all(|i| at_least_zero(i.lo())) {
        Ok(Sign::Positive)
    } else {
        Err(Error::NotBoxDecomposable(format!(
            "part {part} straddles 0"
        )))
    }
}

/// Whether the real tuple `x` lies in the event. `parts` is only read by `SameCell`.
pub fn event_holds(event: EventKind, parts: &[IntervalUnion], x: &[f64]) -> bool {
    match event {
        EventKind::SameSignPairs => x.iter().all(|&v| v > 0.0) || x.iter().all(|&v| v < 0.0),
        EventKind::SameCell => {
            let cell = |v: f64| parts.iter().position(|p| p.contains(v));
            match x.first().map(|&v| cell(v)) {
                Some(Some(c)) => x.iter().all(|&v| cell(v) == Some(c)),
                Some(None) => false,
                None => true,
            }
        }
    }
}

/// `a_s = m^n(A ∩ Π Y_{s(i)}) / m^n(Π Y_{s(i)})` for the parts `Y_0, …, Y_ℓ`.
pub fn cmeas_table(
    m: &SampleableMeasure,
    parts: &[IntervalUnion],
    event: EventKind,
    n: usize,
) -> Result<SymCoeffTable> {
    if parts.is_empty() {
        return Err(Error::DimensionMismatch("no parts".into()));
    }
    for (i, p) in parts.iter().enumerate() {
        if m.interval_prob(p).partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::ZeroMassPart {
                part: p.to_string(),
            });
        }
        if parts[..i].iter().any(|q| !q.is_disjoint_from(p)) {
            return Err(Error::InvalidWeight(format!(
                "part {p} overlaps an earlier part"
            )));
        }
    }
    let signs = match event {
        EventKind::SameSignPairs => Some(parts.iter().map(part_sign).collect::<Result<Vec<_>>>()?),
        EventKind::SameCell => None,
    };
    let l = parts.len() - 1;

    let entry = |s: &[usize]| -> Result<BigRational> {
        let boxes: Vec<IntervalUnion> = s.iter().map(|&d| parts[d].clone()).collect();
        // A ∩ box is either the whole box or empty over these parts.
        let inside = match &signs {
            Some(signs) => s.iter().all(|&d| signs[d] == signs[s[0]]),
            None => s.iter().all(|&d| d == s[0]),
        };
        let denom = product_prob(m, &boxes);
        let numer = if inside { denom } else { 0.0 };
        let ratio = numer / denom;
        BigRational::from_float(ratio).ok_or(Error::ProbabilityOutOfRange(ratio))
    };

    let mut failure = None;
    let table = SymCoeffTable::from_sorted(n, l, |s| match entry(s) {
        Ok(q) => q,
        Err(e) => {
            failure.get_or_insert(e);
            BigRational::zero()
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(table),
    }
}

/// `(m^W)^n(A) = ♠(λ)` where `λ` are the masses of `W`.
pub fn reweighted_event_prob(a: &SymCoeffTable, lambda: &LambdaPoint) -> Result<BigRational> {
    eval_spade(a, lambda)
}

/// Monte Carlo estimate of `(m^W)^n(A)` from i.i.d. draws of `m^W`.
pub fn mc_event_prob(
    m: &SampleableMeasure,
    w: &Weight,
    event: EventKind,
    n: usize,
    samples: u64,
    rng: &mut dyn RngCore,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::UndersizedSample {
            total: 0,
            required: 1,
        });
    }
    let mw = reweight(m, w)?;
    let seed: u64 = rng.random();
    let parts = w.parts();
    let hits = run_chunked(
        seed,
        samples,
        |rng, count| {
            let mut hits = 0u64;
            let mut x = vec![0.0; n];
            for _ in 0..count {
                for v in x.iter_mut() {
                    *v = mw.sample(rng);
                }
                hits += u64::from(event_holds(event, parts, &x));
            }
            Ok(hits)
        },
        |a, b| a + b,
    )?
    .unwrap_or(0);
    Ok(hits as f64 / samples as f64)
}
