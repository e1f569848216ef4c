//! Exact checks of the symmetric-polynomial lemma behind the multiplicity of
//! reweighted measures.
//!
//! A [`SymCoeffTable`] holds `a_s` for `s ∈ {0..ℓ}^n`. The polynomial
//!
//! ```text
//! ♠(λ) = Σ_s a_s λ_{s(0)} ⋯ λ_{s(n-1)}
//! ```
//!
//! on the open simplex takes continuum-many values unless all `a_s` agree. The
//! proof substitutes `λ_ℓ = 1 − Σ λ_i` and reads off the coefficient of
//! `λ_0^{k_0} ⋯ λ_{ℓ-1}^{k_{ℓ-1}}`, which is
//!
//! ```text
//! β = C · Σ_{t ≤ k} a_{Γ(t)} Π C(k_i, t_i) (−1)^{k − Σt},   C = n! / (k_0! ⋯ k_{ℓ-1}! (n−k)!)
//! ```
//!
//! [`beta_formula`] evaluates that sum and [`beta_expand`] expands the
//! polynomial directly; the two agree exactly.

mod cmeas;
mod poly;
mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational};

pub use cmeas::{cmeas_table, event_holds, mc_event_prob, reweighted_event_prob, EventKind};
pub use poly::Polynomial;
pub use verify::{random_table, verify_lemmas, IdentityCheck, VerificationReport};

/// Largest table (`(ℓ+1)^n` entries) accepted.
pub const MAX_TABLE_ENTRIES: usize = 1 << 20;

/// Bounds for the symbolic expansion in [`beta_expand`].
pub const EXPAND_MAX_N: usize = 4;
pub const EXPAND_MAX_L: usize = 3;

/// Symmetric coefficients `a_s`, `s ∈ {0..ℓ}^n`, stored densely in base `ℓ+1`
/// with `s(0)` most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymCoeffTable {
    n: usize,
    l: usize,
    a: Vec<BigRational>,
}

impl SymCoeffTable {
    /// Checks completeness, nonnegativity and `a_{s∘σ} = a_s`.
    pub fn new(n: usize, l: usize, a: Vec<BigRational>) -> Result<Self> {
        let entries = table_entries(n, l)?;
        if a.len() != entries {
            return Err(Error::DimensionMismatch(format!(
                "table for n = {n}, l = {l} needs {entries} entries, got {}",
                a.len()
            )));
        }
        if let Some(q) = a.iter().find(|q| q.is_negative()) {
            return Err(Error::Parse(format!("coefficient {q} is negative")));
        }
        let table = Self { n, l, a };
        for s in table.sequences() {
            let mut sorted = s.clone();
            sorted.sort_unstable();
            if table.get(&s) != table.get(&sorted) {
                return Err(Error::SymmetryViolated { s: sorted, t: s });
            }
        }
        Ok(table)
    }

    /// Builds a table from a function called once per sorted sequence, so it
    /// is symmetric by construction.
    pub fn from_sorted(
        n: usize,
        l: usize,
        mut f: impl FnMut(&[usize]) -> BigRational,
    ) -> Result<Self> {
        let entries = table_entries(n, l)?;
        let values: BTreeMap<Vec<usize>, BigRational> = (0..=l)
            .combinations_with_replacement(n)
            .map(|s| {
                let v = f(&s);
                (s, v)
            })
            .collect();
        let mut a = Vec::with_capacity(entries);
        for mut s in sequences(n, l) {
            s.sort_unstable();
            a.push(values[&s].clone());
        }
        Self::new(n, l, a)
    }

    pub fn constant(n: usize, l: usize, c: BigRational) -> Result<Self> {
        Self::from_sorted(n, l, |_| c.clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn get(&self, s: &[usize]) -> &BigRational {
        &self.a[s.iter().fold(0, |acc, &d| acc * (self.l + 1) + d)]
    }

    /// `a*`, the coefficient of the constant-`ℓ` sequence.
    pub fn a_star(&self) -> &BigRational {
        self.get(&vec![self.l; self.n])
    }

    pub fn is_constant(&self) -> bool {
        self.a.iter().all_equal()
    }

    /// All sequences in `{0..ℓ}^n`, lexicographically.
    pub fn sequences(&self) -> impl Iterator<Item = Vec<usize>> {
        sequences(self.n, self.l)
    }

    /// Sorted representatives with their orbit sizes `n! / Π mult!`.
    pub fn orbits(&self) -> Vec<(Vec<usize>, BigInt)> {
        orbits(self.n, self.l)
    }

    /// Parses `{"n":2, "l":1, "a": {"00":"1", "01":"0", ...}}`.
    ///
    /// Keys are digit strings, comma-separated when `ℓ ≥ 10`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |m: String| Error::Parse(format!("table: {m}"));
        let dim = |key: &str| {
            value
                .get(key)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| bad(format!("missing integer `{key}`")))
        };
        let (n, l) = (dim("n")?, dim("l")?);
        let entries = value
            .get("a")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing object `a`".into()))?;
        let size = table_entries(n, l)?;
        let mut a: Vec<Option<BigRational>> = vec![None; size];
        for (key, v) in entries {
            let s = parse_key(key, l).map_err(bad)?;
            if s.len() != n {
                return Err(bad(format!(
                    "key `{key}` has length {} != n = {n}",
                    s.len()
                )));
            }
            let q = match v {
                Value::String(text) => parse_rational(text)?,
                Value::Number(x) => parse_rational(&x.to_string())?,
                _ => return Err(bad(format!("value for `{key}` is not a rational"))),
            };
            a[s.iter().fold(0, |acc, &d| acc * (l + 1) + d)] = Some(q);
        }
        let a = a
            .into_iter()
            .zip(sequences(n, l))
            .map(|(q, s)| q.ok_or_else(|| bad(format!("missing entry for {}", format_key(&s, l)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, l, a)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("table: {e}")))?;
        Self::from_json(&value)
    }

    pub fn to_json(&self) -> Value {
        let a: Map<String, Value> = self
            .sequences()
            .map(|s| (format_key(&s, self.l), json!(format_rational(self.get(&s)))))
            .collect();
        json!({ "n": self.n, "l": self.l, "a": a })
    }
}

fn table_entries(n: usize, l: usize) -> Result<usize> {
    let entries = (l + 1)
        .checked_pow(n as u32)
        .filter(|&e| e <= MAX_TABLE_ENTRIES)
        .ok_or(Error::BoundExceeded {
            what: "table entries",
            value: (l + 1).saturating_pow(n as u32),
            bound: MAX_TABLE_ENTRIES,
        })?;
    Ok(entries)
}

fn sequences(n: usize, l: usize) -> impl Iterator<Item = Vec<usize>> {
    odometer(&vec![l as u32; n]).map(|t| t.into_iter().map(|d| d as usize).collect())
}

fn orbits(n: usize, l: usize) -> Vec<(Vec<usize>, BigInt)> {
    (0..=l)
        .combinations_with_replacement(n)
        .map(|s| {
            let mut size = factorial(n);
            for (_, group) in &s.iter().chunk_by(|&&d| d) {
                size /= factorial(group.count());
            }
            (s, size)
        })
        .collect()
}

fn parse_key(key: &str, l: usize) -> std::result::Result<Vec<usize>, String> {
    let digits: Vec<&str> = if key.contains(',') {
        key.split(',').collect()
    } else if key.is_empty() {
        Vec::new()
    } else {
        key.split("").filter(|d| !d.is_empty()).collect()
    };
    digits
        .iter()
        .map(|d| match d.trim().parse::<usize>() {
            Ok(v) if v <= l => Ok(v),
            _ => Err(format!("bad symbol `{d}` in key `{key}`")),
        })
        .collect()
}

fn format_key(s: &[usize], l: usize) -> String {
    if l < 10 {
        s.iter().map(|d| d.to_string()).collect()
    } else {
        s.iter().join(",")
    }
}

/// Every vector `t` with `0 ≤ t_i ≤ bounds_i`, lexicographically. One empty
/// vector when `bounds` is empty.
fn odometer(bounds: &[u32]) -> impl Iterator<Item = Vec<u32>> {
    let bounds = bounds.to_vec();
    let mut next = Some(vec![0u32; bounds.len()]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut t = current.clone();
        for i in (0..t.len()).rev() {
            if t[i] < bounds[i] {
                t[i] += 1;
                next = Some(t);
                break;
            }
            t[i] = 0;
        }
        Some(current)
    })
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// A point `(λ_0, …, λ_ℓ)` of the open simplex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LambdaPoint {
    lambdas: Vec<BigRational>,
}

impl LambdaPoint {
    pub fn new(lambdas: Vec<BigRational>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::DimensionMismatch("empty lambda point".into()));
        }
        if let Some(q) = lambdas.iter().find(|q| !q.is_positive()) {
            return Err(Error::InvalidWeight(format!("lambda {q} is not positive")));
        }
        let sum: BigRational = lambdas.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidWeight(format!("lambdas sum to {sum}, not 1")));
        }
        Ok(Self { lambdas })
    }

    /// `(c_0/r, …, c_ℓ/r)`.
    pub fn from_grid(c: &[u32], r: u32) -> Result<Self> {
        let r = BigInt::from(r);
        Self::new(
            c.iter()
                .map(|&ci| BigRational::new(BigInt::from(ci), r.clone()))
                .collect(),
        )
    }

    /// The masses of a weight; floating masses are converted exactly and the
    /// last is adjusted so the sum is exactly 1.
    pub fn from_weight(w: &crate::measures::Weight) -> Result<Self> {
        if let Some(exact) = w.exact_masses() {
            return Self::new(exact.to_vec());
        }
        let mut lambdas: Vec<BigRational> = w
            .masses()
            .iter()
            .map(|&m| {
                BigRational::from_float(m)
                    .ok_or_else(|| Error::InvalidWeight(format!("mass {m} is not finite")))
            })
            .collect::<Result<_>>()?;
        if let Some((last, rest)) = lambdas.split_last_mut() {
            *last = BigRational::one() - rest.iter().sum::<BigRational>();
        }
        Self::new(lambdas)
    }

    pub fn lambdas(&self) -> &[BigRational] {
        &self.lambdas
    }

    /// `ℓ`, one less than the number of coordinates.
    pub fn l(&self) -> usize {
        self.lambdas.len() - 1
    }
}

impl fmt::Display for LambdaPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.lambdas.iter().map(format_rational).join(", ")
        )
    }
}

/// Exponents `(k_0, …, k_{ℓ-1})` with `k = Σ k_i ≤ n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentVector {
    ks: Vec<u32>,
    n: usize,
}

impl ExponentVector {
    pub fn new(ks: Vec<u32>, n: usize) -> Result<Self> {
        let k: u64 = ks.iter().map(|&x| u64::from(x)).sum();
        if k > n as u64 {
            return Err(Error::DimensionMismatch(format!(
                "exponents sum to {k} > n = {n}"
            )));
        }
        Ok(Self { ks, n })
    }

    pub fn ks(&self) -> &[u32] {
        &self.ks
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.ks.len()
    }

    pub fn k(&self) -> usize {
        self.ks.iter().map(|&x| x as usize).sum()
    }

    /// `C = n! / (k_0! ⋯ k_{ℓ-1}! (n−k)!)`.
    pub fn multinomial(&self) -> BigInt {
        let denom = self
            .ks
            .iter()
            .fold(factorial(self.n - self.k()), |acc, &x| {
                acc * factorial(x as usize)
            });
        factorial(self.n) / denom
    }

    /// `Γ(t)`: `t_0` zeros, then `t_1` ones, …, padded with `ℓ` to length `n`.
    pub fn gamma(&self, t: &[u32]) -> Vec<usize> {
        let mut s = Vec::with_capacity(self.n);
        for (symbol, &count) in t.iter().enumerate() {
            s.extend(std::iter::repeat_n(symbol, count as usize));
        }
        s.resize(self.n, self.ks.len());
        s
    }

    /// All exponent vectors of length `l` with `Σ k_i ≤ n`.
    pub fn all(n: usize, l: usize) -> Vec<ExponentVector> {
        odometer(&vec![n as u32; l])
            .filter(|ks| ks.iter().sum::<u32>() as usize <= n)
            .map(|ks| ExponentVector { ks, n })
            .collect()
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k = ({}) of n = {}", self.ks.iter().join(", "), self.n)
    }
}

fn check_point(a: &SymCoeffTable, lambda: &LambdaPoint) -> Result<()> {
    if lambda.l() != a.l {
        return Err(Error::DimensionMismatch(format!(
            "table has l = {} but point has {} coordinates",
            a.l,
            lambda.lambdas.len()
        )));
    }
    Ok(())
}

/// `♠(λ) = Σ_s a_s Π_i λ_{s(i)}`, summed literally over every `s`.
pub fn eval_spade(a: &SymCoeffTable, lambda: &LambdaPoint) -> Result<BigRational> {
    check_point(a, lambda)?;
    Ok(a.sequences()
        .map(|s| {
            s.iter()
                .fold(a.get(&s).clone(), |acc, &d| acc * &lambda.lambdas[d])
        })
        .sum())
}

/// Distinct values of `♠` over a rational grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spread {
    pub resolution: u32,
    pub points: usize,
    pub distinct: usize,
    /// Two grid points where `♠` differs, when it is not constant on the grid.
    pub witness: Option<(LambdaPoint, LambdaPoint)>,
}

/// Evaluates `♠` at every `λ = c / r` with integers `c_i ≥ 1`, `Σ c_i = r`.
///
/// A constant table is not an error: it is reported with `distinct == 1`.
pub fn spread_check(a: &SymCoeffTable, resolution: u32) -> Result<Spread> {
    let parts = a.l + 1;
    if (resolution as usize) < parts {
        return Err(Error::DimensionMismatch(format!(
            "resolution {resolution} admits no grid point with {parts} positive coordinates"
        )));
    }
    // At a fixed resolution ♠(c / r) = N(c) / (D r^n) with integer
    // N(c) = Σ_orbits |orbit| · D a_s · Π c_{s(i)}, so distinct values are
    // distinct numerators.
    let denom = a.a.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scaled: Vec<(Vec<usize>, BigInt)> = a
        .orbits()
        .into_iter()
        .map(|(s, size)| {
            let q = a.get(&s);
            let coeff = size * q.numer() * (&denom / q.denom());
            (s, coeff)
        })
        .collect();
    let mut values: BTreeSet<BigInt> = BTreeSet::new();
    let mut first: Option<(Vec<u32>, BigInt)> = None;
    let mut witness = None;
    let mut points = 0;
    for c in compositions(resolution, parts) {
        let v: BigInt = scaled
            .iter()
            .map(|(s, coeff)| s.iter().fold(coeff.clone(), |acc, &d| acc * c[d]))
            .sum();
        points += 1;
        match &first {
            None => first = Some((c.clone(), v.clone())),
            Some((c0, v0)) if witness.is_none() && *v0 != v => {
                witness = Some((
                    LambdaPoint::from_grid(c0, resolution)?,
                    LambdaPoint::from_grid(&c, resolution)?,
                ));
            }
            _ => {}
        }
        values.insert(v);
    }
    Ok(Spread {
        resolution,
        points,
        distinct: values.len(),
        witness,
    })
}

/// Compositions of `r` into `parts` positive integers.
fn compositions(r: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(left: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for c in 1..=left.saturating_sub(parts as u32 - 1) {
            prefix.push(c);
            go(left - c, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts >= 1 && r as usize >= parts {
        go(r, parts, &mut Vec::new(), &mut out);
    }
    out
}

/// The coefficient `β` both with the multinomial factor and divided by it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Beta {
    /// `C · Σ_t …`, the coefficient of the monomial.
    pub raw: BigRational,
    pub multinomial: BigInt,
    /// `raw / C`.
    pub normalized: BigRational,
}

fn check_exponents(a: &SymCoeffTable, e: &ExponentVector) -> Result<()> {
    if e.l() != a.l || e.n != a.n {
        return Err(Error::DimensionMismatch(format!(
            "table has n = {}, l = {} but exponents have n = {}, l = {}",
            a.n,
            a.l,
            e.n,
            e.l()
        )));
    }
    Ok(())
}

/// Evaluates the closed-form coefficient sum.
pub fn beta_formula(a: &SymCoeffTable, e: &ExponentVector) -> Result<Beta> {
    check_exponents(a, e)?;
    let k = e.k();
    let mut sum = BigRational::zero();
    for t in odometer(&e.ks) {
        let weight = e.ks.iter().zip(&t).fold(BigInt::one(), |acc, (&ki, &ti)| {
            acc * binomial(BigInt::from(ki), BigInt::from(ti))
        });
        let term = a.get(&e.gamma(&t)) * BigRational::from_integer(weight);
        let sum_t: usize = t.iter().map(|&x| x as usize).sum();
        if (k - sum_t).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let c = e.multinomial();
    Ok(Beta {
        raw: &sum * BigRational::from_integer(c.clone()),
        multinomial: c,
        normalized: sum,
    })
}

/// `♠` as a polynomial in `λ_0..λ_{ℓ-1}` after substituting `λ_ℓ = 1 − Σ λ_i`.
pub fn spade_polynomial(a: &SymCoeffTable) -> Result<Polynomial> {
    if a.n > EXPAND_MAX_N {
        return Err(Error::BoundExceeded {
            what: "n for expansion",
            value: a.n,
            bound: EXPAND_MAX_N,
        });
    }
    if a.l > EXPAND_MAX_L {
        return Err(Error::BoundExceeded {
            what: "l for expansion",
            value: a.l,
            bound: EXPAND_MAX_L,
        });
    }
    let vars = a.l;
    let mut lambda: Vec<Polynomial> = (0..vars).map(|i| Polynomial::var(vars, i)).collect();
    let last = lambda
        .iter()
        .fold(Polynomial::constant(vars, BigRational::one()), |acc, x| {
            &acc + &x.scale(&-BigRational::one())
        });
    lambda.push(last);

    // Terms in one orbit are equal, so each multiset is expanded once.
    let mut total = Polynomial::zero(vars);
    for (s, size) in a.orbits() {
        let coeff = a.get(&s) * BigRational::from_integer(size);
        if coeff.is_zero() {
            continue;
        }
        let term = s.iter().fold(Polynomial::constant(vars, coeff), |acc, &d| {
            &acc * &lambda[d]
        });
        total = &total + &term;
    }
    Ok(total)
}

/// Coefficient of `Π λ_i^{k_i}` in the fully expanded substituted polynomial.
pub fn beta_expand(a: &SymCoeffTable, e: &ExponentVector) -> Result<BigRational> {
    check_exponents(a, e)?;
    Ok(spade_polynomial(a)?.coefficient(&e.ks))
}

/// `Σ_{t ≤ k} Π C(k_i, t_i) (−1)^{k − Σt}`, which vanishes for `k ≥ 1`.
pub fn binomial_cancellation(e: &ExponentVector) -> Result<BigInt> {
    if e.k() == 0 {
        return Err(Error::ZeroExponent);
    }
    let k = e.k();
    let mut sum = BigInt::zero();
    for t in odometer(&e.ks) {
        let term = e.ks.iter().zip(&t).fold(BigInt::one(), |acc, (&ki, &ti)| {
            acc * binomial(BigInt::from(ki), BigInt::from(ti))
        });
        let sum_t: usize = t.iter().map(|&x| x as usize).sum();
        if (k - sum_t).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    /// n = 2, ℓ = 1, diagonal ones.
    fn diagonal() -> SymCoeffTable {
        SymCoeffTable::new(2, 1, vec![q(1, 1), q(0, 1), q(0, 1), q(1, 1)]).unwrap()
    }

    #[test]
    fn spade_examples() {
        let c = SymCoeffTable::constant(3, 2, q(5, 7)).unwrap();
        let lambda = LambdaPoint::new(vec![q(1, 6), q(1, 3), q(1, 2)]).unwrap();
        assert_eq!(eval_spade(&c, &lambda).unwrap(), q(5, 7));

        let linear = SymCoeffTable::new(1, 1, vec![q(0, 1), q(1, 1)]).unwrap();
        let lambda = LambdaPoint::new(vec![q(1, 3), q(2, 3)]).unwrap();
        assert_eq!(eval_spade(&linear, &lambda).unwrap(), q(2, 3));

        let lambda = LambdaPoint::new(vec![q(1, 4), q(3, 4)]).unwrap();
        assert_eq!(eval_spade(&diagonal(), &lambda).unwrap(), q(5, 8));
    }

    #[test]
    fn spade_dimension_mismatch() {
        let lambda = LambdaPoint::new(vec![q(1, 3), q(1, 3), q(1, 3)]).unwrap();
        assert!(matches!(
            eval_spade(&diagonal(), &lambda),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn asymmetric_table_rejected() {
        let err = SymCoeffTable::new(2, 1, vec![q(1, 1), q(0, 1), q(1, 2), q(1, 1)]).unwrap_err();
        assert!(matches!(err, Error::SymmetryViolated { .. }));
    }

    #[test]
    fn lambda_point_validation() {
        assert!(LambdaPoint::new(vec![q(1, 2), q(1, 3)]).is_err());
        assert!(LambdaPoint::new(vec![q(0, 1), q(1, 1)]).is_err());
        assert!(LambdaPoint::new(vec![q(1, 1)]).is_ok());
    }

    #[test]
    fn spread_examples() {
        let c = SymCoeffTable::constant(2, 1, q(1, 2)).unwrap();
        for r in [2, 5, 10] {
            let s = spread_check(&c, r).unwrap();
            assert_eq!(s.distinct, 1);
            assert!(s.witness.is_none());
        }

        let s = spread_check(&diagonal(), 10).unwrap();
        assert_eq!(s.points, 9);
        assert_eq!(s.distinct, 5);
        let (p, r) = s.witness.unwrap();
        assert_ne!(
            eval_spade(&diagonal(), &p).unwrap(),
            eval_spade(&diagonal(), &r).unwrap()
        );

        let linear = SymCoeffTable::new(1, 1, vec![q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(spread_check(&linear, 10).unwrap().distinct, 9);
        assert!(spread_check(&linear, 1).is_err());
    }

    #[test]
    fn spread_grows_with_resolution() {
        let counts: Vec<usize> = [4, 8, 16]
            .iter()
            .map(|&r| spread_check(&diagonal(), r).unwrap().distinct)
            .collect();
        assert!(counts.windows(2).all(|w| w[0] < w[1]), "{counts:?}");
    }

    #[test]
    fn beta_examples() {
        let c = SymCoeffTable::constant(3, 2, q(2, 5)).unwrap();
        for e in ExponentVector::all(3, 2) {
            let b = beta_formula(&c, &e).unwrap();
            if e.k() == 0 {
                assert_eq!(e.multinomial(), BigInt::one());
                assert_eq!(b.raw, q(2, 5));
            } else {
                assert!(b.raw.is_zero(), "{e}");
            }
        }

        let d = diagonal();
        assert_eq!(
            beta_expand(&d, &ExponentVector::new(vec![2], 2).unwrap()).unwrap(),
            q(2, 1)
        );
        assert_eq!(
            beta_expand(&d, &ExponentVector::new(vec![1], 2).unwrap()).unwrap(),
            q(-2, 1)
        );
        assert_eq!(
            beta_expand(&d, &ExponentVector::new(vec![0], 2).unwrap()).unwrap(),
            q(1, 1)
        );
    }

    #[test]
    fn beta_formula_matches_expansion_on_diagonal() {
        let d = diagonal();
        for e in ExponentVector::all(2, 1) {
            assert_eq!(
                beta_formula(&d, &e).unwrap().raw,
                beta_expand(&d, &e).unwrap()
            );
        }
    }

    #[test]
    fn single_orbit_perturbation() {
        // a_s = a* except on the orbit of Γ(k); then β / C = a_s − a*.
        let e = ExponentVector::new(vec![1, 1], 3).unwrap();
        let target = e.gamma(e.ks());
        let table = SymCoeffTable::from_sorted(3, 2, |s| {
            if s == target.as_slice() {
                q(7, 3)
            } else {
                q(1, 3)
            }
        })
        .unwrap();
        let b = beta_formula(&table, &e).unwrap();
        assert_eq!(b.multinomial, BigInt::from(6));
        assert_eq!(b.normalized, q(2, 1));
        assert_eq!(b.raw, q(12, 1));
        assert_eq!(beta_expand(&table, &e).unwrap(), b.raw);
    }

    #[test]
    fn expansion_bounds() {
        let big = SymCoeffTable::constant(5, 1, q(1, 1)).unwrap();
        let e = ExponentVector::new(vec![1], 5).unwrap();
        assert!(matches!(
            beta_expand(&big, &e),
            Err(Error::BoundExceeded { .. })
        ));
        assert!(beta_formula(&big, &e).is_ok());
    }

    #[test]
    fn binomial_cancellation_examples() {
        let e = |ks: Vec<u32>| {
            let k = ks.iter().sum::<u32>() as usize;
            ExponentVector::new(ks, k).unwrap()
        };
        assert!(binomial_cancellation(&e(vec![1])).unwrap().is_zero());
        assert!(binomial_cancellation(&e(vec![2, 1])).unwrap().is_zero());
        assert_eq!(
            binomial_cancellation(&e(vec![0, 0])),
            Err(Error::ZeroExponent)
        );
    }

    #[test]
    fn gamma_is_non_decreasing() {
        let e = ExponentVector::new(vec![2, 0, 1], 5).unwrap();
        assert_eq!(e.gamma(&[1, 0, 1]), vec![0, 2, 3, 3, 3]);
        assert_eq!(e.multinomial(), BigInt::from(30));
        assert!(ExponentVector::new(vec![3, 3], 5).is_err());
    }

    #[test]
    fn orbits_cover_sequences() {
        let t = SymCoeffTable::constant(4, 3, q(1, 1)).unwrap();
        let total: BigInt = t.orbits().iter().map(|(_, c)| c.clone()).sum();
        assert_eq!(total, BigInt::from(256));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"n":2, "l":1, "a": {"00":"1","01":"0","10":"0","11":"1"}}"#;
        let t = SymCoeffTable::from_json_str(text).unwrap();
        assert_eq!(t, diagonal());
        assert_eq!(SymCoeffTable::from_json(&t.to_json()).unwrap(), t);

        let missing = r#"{"n":2, "l":1, "a": {"00":"1","01":"0","10":"0"}}"#;
        assert!(SymCoeffTable::from_json_str(missing).is_err());
        let asym = r#"{"n":2, "l":1, "a": {"00":"1","01":"0","10":"1/2","11":"1"}}"#;
        assert!(matches!(
            SymCoeffTable::from_json_str(asym),
            Err(Error::SymmetryViolated { .. })
        ));
    }
}
