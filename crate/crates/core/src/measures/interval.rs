use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Most intervals allowed in one [`IntervalUnion`].
pub const MAX_INTERVALS_PER_UNION: usize = 64;

/// An interval endpoint. Infinite ends are explicit variants, never sentinel floats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    NegInf,
    Finite(f64),
    PosInf,
}

impl Bound {
    pub fn finite(self) -> Option<f64> {
        match self {
            Bound::Finite(x) => Some(x),
            _ => None,
        }
    }

    fn rank(self) -> (i8, f64) {
        match self {
            Bound::NegInf => (-1, 0.0),
            Bound::Finite(x) => (0, x),
            Bound::PosInf => (1, 0.0),
        }
    }

    pub fn cmp_bound(self, other: Bound) -> Ordering {
        let (a, x) = self.rank();
        let (b, y) = other.rank();
        a.cmp(&b).then(x.total_cmp(&y))
    }

    fn max(self, other: Bound) -> Bound {
        if self.cmp_bound(other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    fn min(self, other: Bound) -> Bound {
        if self.cmp_bound(other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    /// `x < self` for a finite real `x`.
    fn exceeds(self, x: f64) -> bool {
        match self {
            Bound::NegInf => false,
            Bound::Finite(b) => x < b,
            Bound::PosInf => true,
        }
    }

    /// `self <= x` for a finite real `x`.
    fn at_most(self, x: f64) -> bool {
        match self {
            Bound::NegInf => true,
            Bound::Finite(a) => a <= x,
            Bound::PosInf => false,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::Finite(x) => write!(f, "{x}"),
            Bound::PosInf => f.write_str("inf"),
        }
    }
}

/// A nonempty half-open interval `[lo, hi)`; a `-inf` lower end is open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: Bound,
    hi: Bound,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Result<Self> {
        for b in [lo, hi] {
            if let Bound::Finite(x) = b {
                if !x.is_finite() {
                    return Err(Error::InvalidInterval(format!(
                        "endpoint {x} must be finite or an explicit infinity"
                    )));
                }
            }
        }
        if lo == Bound::PosInf || hi == Bound::NegInf {
            return Err(Error::InvalidInterval(format!(
                "[{lo}, {hi}) is misoriented"
            )));
        }
        if lo.cmp_bound(hi) != Ordering::Less {
            return Err(Error::InvalidInterval(format!("[{lo}, {hi}) is empty")));
        }
        Ok(Self { lo, hi })
    }

    /// `[lo, hi)` with finite ends.
    pub fn closed_open(lo: f64, hi: f64) -> Result<Self> {
        Self::new(Bound::Finite(lo), Bound::Finite(hi))
    }

    /// `(-inf, hi)`.
    pub fn below(hi: f64) -> Result<Self> {
        Self::new(Bound::NegInf, Bound::Finite(hi))
    }

    /// `[lo, inf)`.
    pub fn at_least(lo: f64) -> Result<Self> {
        Self::new(Bound::Finite(lo), Bound::PosInf)
    }

    pub fn whole_line() -> Self {
        Self {
            lo: Bound::NegInf,
            hi: Bound::PosInf,
        }
    }

    pub fn lo(&self) -> Bound {
        self.lo
    }

    pub fn hi(&self) -> Bound {
        self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo.at_most(x) && self.hi.exceeds(x)
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo.cmp_bound(hi) == Ordering::Less).then_some(Interval { lo, hi })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo == Bound::NegInf { '(' } else { '[' };
        write!(f, "{open}{}, {})", self.lo, self.hi)
    }
}

/// A finite union of pairwise disjoint half-open intervals, in increasing order.
/// May be empty.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    pub fn new(mut intervals: Vec<Interval>) -> Result<Self> {
        if intervals.len() > MAX_INTERVALS_PER_UNION {
            return Err(Error::InvalidInterval(format!(
                "{} intervals exceed the cap of {MAX_INTERVALS_PER_UNION}",
                intervals.len()
            )));
        }
        intervals.sort_by(|a, b| a.lo.cmp_bound(b.lo));
        for pair in intervals.windows(2) {
            if pair[1].lo.cmp_bound(pair[0].hi) == Ordering::Less {
                return Err(Error::InvalidInterval(format!(
                    "{} and {} overlap",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(Self { intervals })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn whole_line() -> Self {
        Self {
            intervals: vec![Interval::whole_line()],
        }
    }

    pub fn single(interval: Interval) -> Self {
        Self {
            intervals: vec![interval],
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        out.sort_by(|a, b| a.lo.cmp_bound(b.lo));
        // Intersections of two disjoint families stay disjoint; the count can
        // exceed the per-union cap only transiently, so no cap check here.
        IntervalUnion { intervals: out }
    }

    pub fn is_disjoint_from(&self, other: &IntervalUnion) -> bool {
        self.intersect(other).is_empty()
    }

    /// Whether the intervals of `parts` tile the whole line with no gaps or overlaps.
    pub fn tiles_line<'a>(parts: impl IntoIterator<Item = &'a IntervalUnion>) -> bool {
        let mut all: Vec<Interval> = parts
            .into_iter()
            .flat_map(|p| p.intervals.iter().copied())
            .collect();
        all.sort_by(|a, b| a.lo.cmp_bound(b.lo));
        let mut reach = Bound::NegInf;
        for i in &all {
            if i.lo != reach {
                return false;
            }
            reach = i.hi;
        }
        reach == Bound::PosInf
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        for (k, i) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl From<Interval> for IntervalUnion {
    fn from(i: Interval) -> Self {
        IntervalUnion::single(i)
    }
}
