//! Batch verification of the lemma identities over random and exhaustive families.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    beta_expand, beta_formula, binomial_cancellation, cmeas_table, eval_spade, odometer,
    reweighted_event_prob, spade_polynomial, spread_check, EventKind, ExponentVector, LambdaPoint,
    SymCoeffTable, EXPAND_MAX_L, EXPAND_MAX_N,
};
use crate::error::{Error, Result};
use crate::measures::{Interval, IntervalUnion, SampleableMeasure};

/// Largest exponent component and component count in the cancellation sweep.
const CANCEL_COMPONENT_MAX: u32 = 4;
const CANCEL_COMPONENTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub cases: u64,
    pub failures: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl IdentityCheck {
    fn from_results(identity: &str, results: Vec<Option<String>>) -> Self {
        let cases = results.len() as u64;
        let mut failures = results.into_iter().flatten();
        let first_failure = failures.next();
        let failures = failures.count() as u64 + u64::from(first_failure.is_some());
        Self {
            identity: identity.to_string(),
            cases,
            failures,
            passed: failures == 0,
            first_failure,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub max_n: usize,
    pub max_l: usize,
    pub tables: usize,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<IdentityCheck>,
}

impl VerificationReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// A random symmetric table with entries `p/q`, `0 ≤ p ≤ 20`, `1 ≤ q ≤ 10`.
/// Resamples until non-constant when `nonconstant` is set and the table has
/// at least two orbits.
pub fn random_table(
    rng: &mut impl Rng,
    n: usize,
    l: usize,
    nonconstant: bool,
) -> Result<SymCoeffTable> {
    loop {
        let table = SymCoeffTable::from_sorted(n, l, |_| {
            BigRational::new(
                rng.random_range(0..=20i64).into(),
                rng.random_range(1..=10i64).into(),
            )
        })?;
        if !nonconstant || !table.is_constant() || table.orbits().len() < 2 {
            return Ok(table);
        }
    }
}

fn random_lambda(rng: &mut impl Rng, l: usize) -> LambdaPoint {
    let c: Vec<u32> = (0..=l).map(|_| rng.random_range(1..=12)).collect();
    let r: u32 = c.iter().sum();
    LambdaPoint::from_grid(&c, r).expect("grid point is valid")
}

/// Runs every identity check with tables of size `n ≤ max_n`, `1 ≤ ℓ ≤ max_l`.
pub fn verify_lemmas(
    max_n: usize,
    max_l: usize,
    tables: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if max_n == 0 || max_l == 0 {
        return Err(Error::DimensionMismatch(
            "max-n and max-l must be at least 1".into(),
        ));
    }
    if max_n > EXPAND_MAX_N {
        return Err(Error::BoundExceeded {
            what: "max-n",
            value: max_n,
            bound: EXPAND_MAX_N,
        });
    }
    if max_l > EXPAND_MAX_L {
        return Err(Error::BoundExceeded {
            what: "max-l",
            value: max_l,
            bound: EXPAND_MAX_L,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |nonconstant: bool| -> Result<Vec<SymCoeffTable>> {
        (0..tables)
            .map(|_| {
                let n = rng.random_range(1..=max_n);
                let l = rng.random_range(1..=max_l);
                random_table(&mut rng, n, l, nonconstant)
            })
            .collect()
    };
    let general = draw(false)?;
    let nonconstant: Vec<SymCoeffTable> = draw(true)?
        .into_iter()
        .filter(|t| !t.is_constant())
        .collect();
    let constants: Vec<(SymCoeffTable, BigRational, LambdaPoint)> = (0..tables)
        .map(|_| {
            let n = rng.random_range(1..=max_n);
            let l = rng.random_range(1..=max_l);
            let c = BigRational::new(
                rng.random_range(0..=20i64).into(),
                rng.random_range(1..=10i64).into(),
            );
            let lambda = random_lambda(&mut rng, l);
            SymCoeffTable::constant(n, l, c.clone()).map(|t| (t, c, lambda))
        })
        .collect::<Result<_>>()?;

    let checks = vec![
        check_cancellation(),
        check_beta_vs_expand(&general)?,
        check_single_orbit(max_n, max_l)?,
        check_spade_constant(&constants)?,
        check_spread_nonconstant(&nonconstant)?,
        check_spread_constant(&constants)?,
        check_cmeas()?,
    ];
    Ok(VerificationReport {
        max_n,
        max_l,
        tables,
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn check_cancellation() -> IdentityCheck {
    let mut vectors = Vec::new();
    for len in 1..=CANCEL_COMPONENTS {
        for ks in odometer(&vec![CANCEL_COMPONENT_MAX; len]) {
            let k = ks.iter().sum::<u32>() as usize;
            if k >= 1 {
                vectors.push(ExponentVector::new(ks, k).expect("k = n"));
            }
        }
    }
    let results = vectors
        .par_iter()
        .map(|e| match binomial_cancellation(e) {
            Ok(v) if v.is_zero() => None,
            Ok(v) => Some(format!("{e}: sum {v}")),
            Err(err) => Some(format!("{e}: {err}")),
        })
        .collect();
    IdentityCheck::from_results("binomial-cancellation", results)
}

fn check_beta_vs_expand(tables: &[SymCoeffTable]) -> Result<IdentityCheck> {
    let results: Vec<Vec<Option<String>>> = tables
        .par_iter()
        .map(|a| -> Result<Vec<Option<String>>> {
            let p = spade_polynomial(a)?;
            ExponentVector::all(a.n(), a.l())
                .into_iter()
                .map(|e| {
                    let formula = beta_formula(a, &e)?.raw;
                    let expanded = p.coefficient(e.ks());
                    Ok((formula != expanded)
                        .then(|| format!("{e}: formula {formula} != expansion {expanded}")))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(IdentityCheck::from_results(
        "beta-formula-equals-expansion",
        results.into_iter().flatten().collect(),
    ))
}

/// With `a_t = a*` off the orbit of `Γ(k)`, `β = C (a_s − a*)` and `β / C = a_s − a*`.
fn check_single_orbit(max_n: usize, max_l: usize) -> Result<IdentityCheck> {
    let mut results = Vec::new();
    let (a_star, a_s) = (
        BigRational::new(1.into(), 3.into()),
        BigRational::new(7.into(), 2.into()),
    );
    for n in 1..=max_n {
        for l in 1..=max_l {
            for e in ExponentVector::all(n, l) {
                if e.k() == 0 {
                    continue;
                }
                let target = e.gamma(e.ks());
                let table = SymCoeffTable::from_sorted(n, l, |s| {
                    if s == target.as_slice() {
                        a_s.clone()
                    } else {
                        a_star.clone()
                    }
                })?;
                let beta = beta_formula(&table, &e)?;
                let diff = &a_s - &a_star;
                let c = BigRational::from_integer(e.multinomial());
                let expanded = beta_expand(&table, &e)?;
                results.push(
                    (beta.normalized != diff || beta.raw != &c * &diff || expanded != beta.raw)
                        .then(|| {
                            format!(
                                "n = {n}, l = {l}, {e}: beta {} / C = {}",
                                beta.raw, beta.normalized
                            )
                        }),
                );
            }
        }
    }
    Ok(IdentityCheck::from_results("beta-single-orbit", results))
}

fn check_spade_constant(
    constants: &[(SymCoeffTable, BigRational, LambdaPoint)],
) -> Result<IdentityCheck> {
    let results = constants
        .iter()
        .map(|(t, c, lambda)| {
            let v = eval_spade(t, lambda)?;
            Ok((v != *c).then(|| format!("constant {c} evaluates to {v} at {lambda}")))
        })
        .collect::<Result<_>>()?;
    Ok(IdentityCheck::from_results("spade-of-constant", results))
}

/// Non-constant tables take at least two values and strictly more on a finer grid.
fn check_spread_nonconstant(tables: &[SymCoeffTable]) -> Result<IdentityCheck> {
    let results = tables
        .par_iter()
        .map(|t| {
            let coarse = 2 * (t.l() as u32 + 1);
            let a = spread_check(t, coarse)?;
            let b = spread_check(t, 2 * coarse)?;
            Ok(
                (a.distinct < 2 || b.distinct <= a.distinct || a.witness.is_none()).then(|| {
                    format!(
                        "n = {}, l = {}: {} values at resolution {coarse}, {} at {}",
                        t.n(),
                        t.l(),
                        a.distinct,
                        b.distinct,
                        2 * coarse
                    )
                }),
            )
        })
        .collect::<Result<_>>()?;
    Ok(IdentityCheck::from_results(
        "spread-of-nonconstant",
        results,
    ))
}

fn check_spread_constant(
    constants: &[(SymCoeffTable, BigRational, LambdaPoint)],
) -> Result<IdentityCheck> {
    let results = constants
        .iter()
        .map(|(t, c, _)| {
            let s = spread_check(t, 3 * (t.l() as u32 + 1))?;
            Ok((s.distinct != 1).then(|| format!("constant {c} took {} values", s.distinct)))
        })
        .collect::<Result<_>>()?;
    Ok(IdentityCheck::from_results("spread-of-constant", results))
}

/// The same-sign table under the normal gives `λ² + (1 − λ)²`.
fn check_cmeas() -> Result<IdentityCheck> {
    let parts: Vec<IntervalUnion> = vec![
        Interval::below(0.0)?.into(),
        Interval::at_least(0.0)?.into(),
    ];
    let table = cmeas_table(
        &SampleableMeasure::StdNormal,
        &parts,
        EventKind::SameSignPairs,
        2,
    )?;
    let mut results = Vec::new();
    for d in 1..10i64 {
        let lam = BigRational::new(d.into(), 10.into());
        let rest = BigRational::one() - &lam;
        let expected = &lam * &lam + &rest * &rest;
        let got = reweighted_event_prob(&table, &LambdaPoint::new(vec![lam.clone(), rest])?)?;
        results.push((got != expected).then(|| format!("lambda {lam}: {got} != {expected}")));
    }
    Ok(IdentityCheck::from_results(
        "cmeas-same-sign-pairs",
        results,
    ))
}
