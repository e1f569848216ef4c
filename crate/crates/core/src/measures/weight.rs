use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use super::interval::{Bound, Interval, IntervalUnion};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, to_f64};

const FLOAT_SUM_TOLERANCE: f64 = 1e-12;

/// A partition of the real line into interval unions, each with a positive mass.
///
/// Masses given as rationals are kept exactly and must sum to exactly 1;
/// floating masses must sum to 1 within `1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    parts: Vec<IntervalUnion>,
    masses: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

impl Weight {
    pub fn new(parts: Vec<IntervalUnion>, masses: Vec<f64>) -> Result<Self> {
        check_parts(&parts, masses.len())?;
        for (k, &u) in masses.iter().enumerate() {
            if !(u.is_finite() && u > 0.0) {
                return Err(Error::InvalidWeight(format!(
                    "mass {u} of part {k} is not positive"
                )));
            }
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > FLOAT_SUM_TOLERANCE {
            return Err(Error::InvalidWeight(format!(
                "masses sum to {total}, not 1"
            )));
        }
        Ok(Self {
            parts,
            masses,
            exact: None,
        })
    }

    pub fn exact(parts: Vec<IntervalUnion>, masses: Vec<BigRational>) -> Result<Self> {
        check_parts(&parts, masses.len())?;
        for (k, u) in masses.iter().enumerate() {
            if !u.is_positive() {
                return Err(Error::InvalidWeight(format!(
                    "mass {} of part {k} is not positive",
                    format_rational(u)
                )));
            }
        }
        let total: BigRational = masses.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidWeight(format!(
                "masses sum to {}, not 1",
                format_rational(&total)
            )));
        }
        Ok(Self {
            parts,
            masses: masses.iter().map(to_f64).collect(),
            exact: Some(masses),
        })
    }

    /// The one-part weight `{R}` with mass 1.
    pub fn trivial() -> Self {
        Self {
            parts: vec![IntervalUnion::whole_line()],
            masses: vec![1.0],
            exact: Some(vec![BigRational::one()]),
        }
    }

    /// Two parts `(-inf, cut)` and `[cut, inf)` with exact masses `(1 - upper, upper)`.
    pub fn split_at(cut: f64, upper: BigRational) -> Result<Self> {
        let lower = BigRational::one() - &upper;
        Self::exact(
            vec![
                Interval::below(cut)?.into(),
                Interval::at_least(cut)?.into(),
            ],
            vec![lower, upper],
        )
    }

    pub fn parts(&self) -> &[IntervalUnion] {
        &self.parts
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn exact_masses(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Index of the part containing `x`.
    pub fn part_of(&self, x: f64) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(x))
    }

    /// Parses `{"parts": [[["-inf", 0.0]], [[0.0, "inf"]]], "masses": ["3/10", "7/10"]}`.
    ///
    /// Masses written as strings are exact; bare JSON numbers are floating.
    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("weight: {m}"));
        let parts_json = value
            .get("parts")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `parts` array"))?;
        let masses_json = value
            .get("masses")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `masses` array"))?;

        let mut parts = Vec::with_capacity(parts_json.len());
        for part in parts_json {
            let pairs = part.as_array().ok_or_else(|| bad("part is not an array"))?;
            let mut intervals = Vec::with_capacity(pairs.len());
            for pair in pairs {
                let ends = pair
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| bad("interval is not a [lo, hi] pair"))?;
                intervals.push(Interval::new(
                    parse_bound(&ends[0])?,
                    parse_bound(&ends[1])?,
                )?);
            }
            parts.push(IntervalUnion::new(intervals)?);
        }

        if masses_json.iter().all(Value::is_string) {
            let masses = masses_json
                .iter()
                .map(|m| parse_rational(m.as_str().unwrap_or_default()))
                .collect::<Result<Vec<_>>>()?;
            Self::exact(parts, masses)
        } else {
            let masses = masses_json
                .iter()
                .map(|m| match m {
                    Value::Number(x) => x.as_f64().ok_or_else(|| bad("mass is not finite")),
                    Value::String(s) => parse_rational(s).map(|q| to_f64(&q)),
                    _ => Err(bad("mass is neither a number nor a string")),
                })
                .collect::<Result<Vec<_>>>()?;
            Self::new(parts, masses)
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("weight: {e}")))?;
        Self::from_json(&value)
    }

    pub fn to_json(&self) -> Value {
        let parts: Vec<Value> = self
            .parts
            .iter()
            .map(|p| {
                Value::Array(
                    p.intervals()
                        .iter()
                        .map(|i| json!([bound_json(i.lo()), bound_json(i.hi())]))
                        .collect(),
                )
            })
            .collect();
        let masses: Vec<Value> = match &self.exact {
            Some(exact) => exact.iter().map(|q| json!(format_rational(q))).collect(),
            None => self.masses.iter().map(|&u| json!(u)).collect(),
        };
        json!({ "parts": parts, "masses": masses })
    }
}

fn check_parts(parts: &[IntervalUnion], n_masses: usize) -> Result<()> {
    if parts.is_empty() {
        return Err(Error::InvalidWeight("no parts".into()));
    }
    if parts.len() != n_masses {
        return Err(Error::InvalidWeight(format!(
            "{} parts but {n_masses} masses",
            parts.len()
        )));
    }
    if let Some(k) = parts.iter().position(IntervalUnion::is_empty) {
        return Err(Error::InvalidWeight(format!("part {k} is empty")));
    }
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            if !a.is_disjoint_from(b) {
                return Err(Error::InvalidWeight(format!("parts {a} and {b} overlap")));
            }
        }
    }
    if !IntervalUnion::tiles_line(parts) {
        return Err(Error::InvalidWeight(
            "parts do not cover the real line".into(),
        ));
    }
    Ok(())
}

fn parse_bound(v: &Value) -> Result<Bound> {
    match v {
        Value::Number(x) => x
            .as_f64()
            .map(Bound::Finite)
            .ok_or_else(|| Error::Parse(format!("bad endpoint {x}"))),
        Value::String(s) => match s.as_str() {
            "-inf" => Ok(Bound::NegInf),
            "inf" | "+inf" => Ok(Bound::PosInf),
            other => parse_rational(other).map(|q| Bound::Finite(to_f64(&q))),
        },
        _ => Err(Error::Parse(format!("bad endpoint {v}"))),
    }
}

fn bound_json(b: Bound) -> Value {
    match b {
        Bound::NegInf => json!("-inf"),
        Bound::Finite(x) => json!(x),
        Bound::PosInf => json!("inf"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_documented_format() {
        let w = Weight::from_json_str(
            r#"{"parts": [[["-inf",0.0]], [[0.0,"inf"]]], "masses": ["3/10","7/10"]}"#,
        )
        .unwrap();
        assert_eq!(w.exact_masses().unwrap(), &[q(3, 10), q(7, 10)]);
        assert_eq!(w.part_of(-1.0), Some(0));
        assert_eq!(w.part_of(0.0), Some(1));
        assert_eq!(Weight::from_json(&w.to_json()).unwrap(), w);
    }

    #[test]
    fn decimal_strings_are_exact() {
        let w = Weight::from_json_str(
            r#"{"parts": [[["-inf",0.0]], [[0.0,"inf"]]], "masses": ["0.1","0.9"]}"#,
        )
        .unwrap();
        assert_eq!(w.exact_masses().unwrap(), &[q(1, 10), q(9, 10)]);
    }

    #[test]
    fn float_masses_use_tolerance() {
        let parts = || {
            vec![
                IntervalUnion::single(Interval::below(0.0).unwrap()),
                IntervalUnion::single(Interval::at_least(0.0).unwrap()),
            ]
        };
        assert!(Weight::new(parts(), vec![0.3, 0.7]).is_ok());
        assert!(Weight::new(parts(), vec![0.3, 0.7 + 1e-9]).is_err());
        assert!(Weight::new(parts(), vec![0.0, 1.0]).is_err());
        assert!(Weight::new(parts(), vec![1.0]).is_err());
    }

    #[test]
    fn rejects_bad_partitions() {
        let exact = |parts: Vec<IntervalUnion>| {
            let k = parts.len() as i64;
            Weight::exact(parts, vec![q(1, k); k as usize])
        };
        let neg = IntervalUnion::single(Interval::below(0.0).unwrap());
        let pos1 = IntervalUnion::single(Interval::at_least(1.0).unwrap());
        assert!(exact(vec![neg.clone(), pos1]).is_err());
        let overlap = IntervalUnion::single(Interval::at_least(-1.0).unwrap());
        assert!(exact(vec![neg.clone(), overlap]).is_err());
        assert!(Weight::exact(
            vec![neg, IntervalUnion::single(Interval::at_least(0.0).unwrap())],
            vec![q(1, 2), q(1, 3)]
        )
        .is_err());
    }

    #[test]
    fn multi_interval_parts() {
        let w = Weight::from_json_str(
            r#"{"parts": [[["-inf",-1.0],[1.0,"inf"]], [[-1.0,1.0]]], "masses": ["1/2","1/2"]}"#,
        )
        .unwrap();
        assert_eq!(w.part_of(5.0), Some(0));
        assert_eq!(w.part_of(0.0), Some(1));
    }

    #[test]
    fn trivial_weight() {
        let w = Weight::trivial();
        assert_eq!(w.len(), 1);
        assert_eq!(w.part_of(1e9), Some(0));
    }
}
