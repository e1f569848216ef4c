//! Continuous probability measures on the real line, weights, and reweighting.
//!
//! A reweighting `m^W` keeps the shape of `m` inside each part `I` of the
//! weight but rescales the part's total mass to `u_W(I)`:
//!
//! ```text
//! m^W(B) = Σ_I u_W(I) · m(B ∩ I) / m(I)
//! ```
//!
//! Sampling from `m^W` picks a part with probability `u_W(I)` and then samples
//! `m` conditioned on that part.

mod interval;
mod weight;

pub use interval::{Bound, Interval, IntervalUnion, MAX_INTERVALS_PER_UNION};
pub use weight::Weight;

use std::f64::consts::SQRT_2;
use std::fmt;

use rand::{Rng, RngCore};
use rand_distr::StandardNormal;
use statrs::function::erf::{erfc, erfc_inv};

use crate::error::{Error, Result};

/// Iteration cap for rejection sampling a conditioned measure.
pub const REJECTION_CAP: usize = 1_000_000;

const INVERSE_CDF_ATTEMPTS: usize = 16;

/// A sampleable, continuous probability measure on `R`.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleableMeasure {
    StdNormal,
    Uniform01,
    Reweighted(Box<Reweighted>),
}

/// `m^W`, with the base masses `m(I)` of the weight's parts cached.
#[derive(Debug, Clone, PartialEq)]
pub struct Reweighted {
    base: SampleableMeasure,
    weight: Weight,
    base_masses: Vec<f64>,
}

impl Reweighted {
    pub fn base(&self) -> &SampleableMeasure {
        &self.base
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }
}

impl SampleableMeasure {
    /// Parses the command-line measure names `normal` and `uniform01`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "normal" | "std-normal" => Ok(Self::StdNormal),
            "uniform01" => Ok(Self::Uniform01),
            other => Err(Error::Parse(format!("unknown measure `{other}`"))),
        }
    }

    /// The smallest interval outside of which the measure has no mass.
    pub fn support(&self) -> Interval {
        match self {
            Self::StdNormal => Interval::whole_line(),
            Self::Uniform01 => Interval::closed_open(0.0, 1.0).expect("[0,1) is valid"),
            Self::Reweighted(r) => r.base.support(),
        }
    }

    pub fn descriptor(&self) -> String {
        self.to_string()
    }

    /// Probability of a single half-open interval.
    pub fn interval_mass(&self, i: &Interval) -> f64 {
        match self {
            Self::StdNormal => normal_mass(i.lo(), i.hi()),
            Self::Uniform01 => {
                let lo = i.lo().finite().unwrap_or(f64::NEG_INFINITY).max(0.0);
                let hi = i.hi().finite().unwrap_or(f64::INFINITY).min(1.0);
                (hi - lo).max(0.0)
            }
            Self::Reweighted(r) => {
                let piece = IntervalUnion::single(*i);
                r.weight
                    .parts()
                    .iter()
                    .zip(r.weight.masses())
                    .zip(&r.base_masses)
                    .map(|((part, &u), &base_mass)| {
                        u * r.base.interval_prob(&piece.intersect(part)) / base_mass
                    })
                    .sum()
            }
        }
    }

    /// Probability of an interval union.
    pub fn interval_prob(&self, b: &IntervalUnion) -> f64 {
        b.intervals().iter().map(|i| self.interval_mass(i)).sum()
    }

    /// `P(X < x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        match Interval::below(x) {
            Ok(i) => self.interval_mass(&i),
            Err(_) => f64::NAN,
        }
    }

    pub fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        match self {
            Self::StdNormal => rng.sample(StandardNormal),
            Self::Uniform01 => rng.random::<f64>(),
            Self::Reweighted(r) => {
                let k = pick_index(r.weight.masses(), rng);
                r.base
                    .conditional_sample(&r.weight.parts()[k], rng)
                    .expect("weight parts were validated to have positive base mass")
            }
        }
    }

    /// Samples the measure conditioned on `i`.
    ///
    /// Uses the inverse CDF when the measure has one, falling back to rejection
    /// sampling (capped at [`REJECTION_CAP`]) if rounding pushes a draw out of `i`.
    pub fn conditional_sample(&self, i: &IntervalUnion, rng: &mut dyn RngCore) -> Result<f64> {
        let masses: Vec<f64> = match self {
            Self::Reweighted(r) => r
                .weight
                .parts()
                .iter()
                .zip(r.weight.masses())
                .zip(&r.base_masses)
                .map(|((part, &u), &bm)| u * r.base.interval_prob(&i.intersect(part)) / bm)
                .collect(),
            _ => i
                .intervals()
                .iter()
                .map(|j| self.interval_mass(j))
                .collect(),
        };
        let total: f64 = masses.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::ZeroMassPart {
                part: i.to_string(),
            });
        }
        let k = pick_index(&masses, rng);
        match self {
            Self::Reweighted(r) => r
                .base
                .conditional_sample(&i.intersect(&r.weight.parts()[k]), rng),
            _ => self.sample_in_interval(&i.intervals()[k], rng),
        }
    }

    fn sample_in_interval(&self, i: &Interval, rng: &mut dyn RngCore) -> Result<f64> {
        for _ in 0..INVERSE_CDF_ATTEMPTS {
            let x = match self {
                Self::StdNormal => normal_inverse_in(i.lo(), i.hi(), rng.random::<f64>()),
                Self::Uniform01 => {
                    let lo = i.lo().finite().unwrap_or(0.0).max(0.0);
                    let hi = i.hi().finite().unwrap_or(1.0).min(1.0);
                    lo + rng.random::<f64>() * (hi - lo)
                }
                Self::Reweighted(_) => {
                    unreachable!("reweighted measures condition through the base")
                }
            };
            if i.contains(x) {
                return Ok(x);
            }
        }
        for _ in 0..REJECTION_CAP {
            let x = self.sample(rng);
            if i.contains(x) {
                return Ok(x);
            }
        }
        Err(Error::RejectionCapExceeded(REJECTION_CAP))
    }

    /// Whether the open interval `(lo, hi)` receives positive mass.
    pub fn is_positive_on(&self, lo: f64, hi: f64) -> bool {
        match Interval::closed_open(lo, hi) {
            Ok(i) => self.interval_mass(&i) > 0.0,
            Err(_) => false,
        }
    }
}

impl fmt::Display for SampleableMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::StdNormal => f.write_str("normal"),
            Self::Uniform01 => f.write_str("uniform01"),
            Self::Reweighted(r) => write!(f, "reweight({}, {})", r.base, r.weight.to_json()),
        }
    }
}

/// The reweighting `m^W`. Every part of `W` must have positive `m`-mass.
pub fn reweight(m: &SampleableMeasure, w: &Weight) -> Result<SampleableMeasure> {
    let base_masses: Vec<f64> = w.parts().iter().map(|p| m.interval_prob(p)).collect();
    if let Some(k) = base_masses.iter().position(|&bm| bm.is_nan() || bm <= 0.0) {
        return Err(Error::ZeroMassPart {
            part: w.parts()[k].to_string(),
        });
    }
    Ok(SampleableMeasure::Reweighted(Box::new(Reweighted {
        base: m.clone(),
        weight: w.clone(),
        base_masses,
    })))
}

/// Mass of a box under the i.i.d. product measure `m^n`.
pub fn product_prob(m: &SampleableMeasure, boxes: &[IntervalUnion]) -> f64 {
    boxes.iter().map(|b| m.interval_prob(b)).product()
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Standard normal quantile.
pub fn normal_quantile(p: f64) -> f64 {
    -SQRT_2 * erfc_inv(2.0 * p)
}

fn lower_tail(b: Bound) -> f64 {
    match b {
        Bound::NegInf => 0.0,
        Bound::Finite(x) => normal_cdf(x),
        Bound::PosInf => 1.0,
    }
}

fn upper_tail(b: Bound) -> f64 {
    match b {
        Bound::NegInf => 1.0,
        Bound::Finite(x) => normal_cdf(-x),
        Bound::PosInf => 0.0,
    }
}

// Right-of-zero intervals are computed through the upper tail so that far
// tails such as [5, inf) keep their relative precision.
fn uses_upper_tail(lo: Bound) -> bool {
    matches!(lo, Bound::Finite(a) if a >= 0.0)
}

fn normal_mass(lo: Bound, hi: Bound) -> f64 {
    if uses_upper_tail(lo) {
        (upper_tail(lo) - upper_tail(hi)).max(0.0)
    } else {
        (lower_tail(hi) - lower_tail(lo)).max(0.0)
    }
}

fn normal_inverse_in(lo: Bound, hi: Bound, u: f64) -> f64 {
    if uses_upper_tail(lo) {
        let (p_lo, p_hi) = (upper_tail(hi), upper_tail(lo));
        -normal_quantile(p_lo + u * (p_hi - p_lo))
    } else {
        let (p_lo, p_hi) = (lower_tail(lo), lower_tail(hi));
        normal_quantile(p_lo + u * (p_hi - p_lo))
    }
}

fn pick_index(masses: &[f64], rng: &mut dyn RngCore) -> usize {
    let total: f64 = masses.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (k, &w) in masses.iter().enumerate() {
        if u < w {
            return k;
        }
        u -= w;
    }
    masses.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}
