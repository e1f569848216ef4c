//! Quantifier-free type statistics.
//!
//! If a structure's orbit carries exactly one invariant measure and that
//! measure realizes `α_n` labeled types on `n` fixed indices, all of them are
//! equally likely: each has probability `1/α_n`. The tests here check that
//! prediction by Monte Carlo (uniqueness) and check that measures built from
//! different reweightings can be told apart when the orbit is not uniquely
//! ergodic (multiplicity).

pub mod chisq;
mod report;

pub use report::{Decision, Rule, TestReport};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use itertools::Itertools;
use rand::RngCore;
use serde_json::json;

use crate::borel::{edge_count, PrefixSampler, PushforwardSampler};
use crate::error::{Error, Result};
use crate::finstruct::{are_isomorphic, labeled_type, TypeId, BRUTE_FORCE_BOUND};
use crate::measures::{reweight, SampleableMeasure, Weight};
use crate::montecarlo::run_chunked;
use crate::reducts::{induce_reduct_unchecked, ReductKind};

/// Significance used when none is given.
pub const DEFAULT_SIGNIFICANCE: f64 = 0.001;

/// Largest `n` for [`enumerate_types`] (`7! = 5040` order patterns).
pub const ENUMERATION_BOUND: usize = 7;

/// Largest prefix for [`check_high_homogeneity_sampled`]. Isomorphism is only
/// tested between `k`-element substructures, so `k` carries the brute-force bound.
pub const HH_PREFIX_BOUND: usize = 16;

/// Labeled types realized by a reduct on `n` distinct reals, and their number `α_n`.
///
/// Every labeled type is realized by some order pattern of `n` distinct reals,
/// so applying the reduct to all `n!` permutations of `1..=n` finds them all.
pub fn enumerate_types(kind: ReductKind, n: usize) -> Result<(BTreeSet<TypeId>, usize)> {
    if n > ENUMERATION_BOUND {
        return Err(Error::BoundExceeded {
            what: "prefix size",
            value: n,
            bound: ENUMERATION_BOUND,
        });
    }
    let sig = Arc::new(kind.signature());
    let types: BTreeSet<TypeId> = (1..=n)
        .permutations(n)
        .map(|p| {
            let t: Vec<f64> = p.into_iter().map(|v| v as f64).collect();
            labeled_type(&induce_reduct_unchecked(kind, Arc::clone(&sig), &t))
        })
        .collect();
    let alpha = types.len();
    Ok((types, alpha))
}

/// Observed counts of labeled types of `n`-element prefixes.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    pub n: usize,
    pub counts: BTreeMap<TypeId, u64>,
    pub total: u64,
    /// Sampler description (structure and measure).
    pub source: String,
    pub seed: u64,
}

impl FrequencyTable {
    pub fn empty(n: usize, source: impl Into<String>, seed: u64) -> Self {
        Self {
            n,
            counts: BTreeMap::new(),
            total: 0,
            source: source.into(),
            seed,
        }
    }

    pub fn record(&mut self, id: TypeId) {
        *self.counts.entry(id).or_insert(0) += 1;
        self.total += 1;
    }

    /// Adds counts from another table over the same prefix size.
    pub fn merge(mut self, other: FrequencyTable) -> Self {
        for (id, c) in other.counts {
            *self.counts.entry(id).or_insert(0) += c;
        }
        self.total += other.total;
        self
    }

    pub fn count(&self, id: &TypeId) -> u64 {
        self.counts.get(id).copied().unwrap_or(0)
    }

    pub fn frequency(&self, id: &TypeId) -> f64 {
        self.count(id) as f64 / self.total as f64
    }

    /// `type_id,count`, one row per observed type.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("type_id,count\n");
        for (id, c) in &self.counts {
            writeln!(out, "{},{c}", id.to_hex()).unwrap();
        }
        out
    }
}

/// Counts labeled types over `samples` independent prefixes of size `n`.
///
/// One base seed is drawn from `rng`; the work is split into fixed chunks
/// with independent streams, so the table does not depend on thread count.
pub fn estimate_frequencies(
    sampler: &dyn PrefixSampler,
    n: usize,
    samples: u64,
    rng: &mut dyn RngCore,
) -> Result<FrequencyTable> {
    if samples == 0 {
        return Err(Error::UndersizedSample {
            total: 0,
            required: 1,
        });
    }
    let seed = rng.next_u64();
    let label = sampler.label();
    let table = run_chunked(
        seed,
        samples,
        |chunk_rng, count| {
            let mut t = FrequencyTable::empty(n, label.clone(), seed);
            for _ in 0..count {
                t.record(labeled_type(&sampler.sample_prefix(n, chunk_rng)?));
            }
            Ok(t)
        },
        FrequencyTable::merge,
    )?;
    Ok(table.expect("samples > 0"))
}

/// Chi-square goodness of fit of `table` to the uniform law on `expected`.
///
/// Observing any type outside `expected` fails outright. Totals up to
/// [`chisq::EXACT_TOTAL_LIMIT`] use the exact multinomial distribution when
/// its outcome space is small enough.
pub fn test_uniformity(
    table: &FrequencyTable,
    expected: &BTreeSet<TypeId>,
    significance: f64,
) -> Result<TestReport> {
    let k = expected.len();
    if k == 0 {
        return Err(Error::InvalidStructure("no expected types".into()));
    }
    let required = 10 * k as u64;
    if table.total < required {
        return Err(Error::UndersizedSample {
            total: table.total,
            required,
        });
    }
    let unexpected: u64 = table
        .counts
        .iter()
        .filter(|(id, _)| !expected.contains(*id))
        .map(|(_, c)| c)
        .sum();
    let observed: Vec<u64> = expected.iter().map(|id| table.count(id)).collect();
    let probs = vec![1.0 / k as f64; k];
    let df = k - 1;

    let base = |stat: f64, threshold: f64, method: &str| {
        TestReport::new("uniformity", stat, threshold, Rule::AtMost)
            .with_param("n", table.n)
            .with_param("samples", table.total)
            .with_param("significance", significance)
            .with_param("alpha_n", k)
            .with_param("df", df)
            .with_param("method", method)
            .with_param("source", table.source.clone())
            .with_param("seed", table.seed)
    };

    if unexpected > 0 {
        return Ok(base(
            f64::INFINITY,
            chisq::critical_value(df, significance),
            "support",
        )
        .with_p_value(0.0)
        .with_detail(format!(
            "{unexpected} samples had types outside the expected set"
        )));
    }
    let stat = chisq::goodness_of_fit(&observed, &probs);
    if df == 0 {
        return Ok(base(stat, 0.0, "vacuous").with_p_value(1.0));
    }
    if table.total <= chisq::EXACT_TOTAL_LIMIT {
        if let Some((p, critical)) = chisq::exact_multinomial(&observed, &probs, significance) {
            return Ok(base(stat, critical, "exact-multinomial").with_p_value(p));
        }
    }
    Ok(base(
        stat,
        chisq::critical_value(df, significance),
        "wilson-hilferty",
    )
    .with_p_value(chisq::p_value(stat, df)))
}

fn check_tuples(tuples: &[Vec<usize>]) -> Result<usize> {
    let first = tuples
        .first()
        .ok_or_else(|| Error::MalformedTuples("no tuples".into()))?;
    for t in tuples {
        if t.len() != first.len() {
            return Err(Error::MalformedTuples(format!(
                "{t:?} has length {}, expected {}",
                t.len(),
                first.len()
            )));
        }
        if t.iter().duplicates().next().is_some() {
            return Err(Error::MalformedTuples(format!("{t:?} repeats an index")));
        }
    }
    Ok(first.len())
}

/// Chi-square homogeneity of the labeled types read off at each index tuple.
///
/// An invariant measure gives every tuple of distinct indices the same type
/// distribution. Prefixes are sampled at size `max index + 1`.
pub fn test_exchangeability(
    sampler: &dyn PrefixSampler,
    tuples: &[Vec<usize>],
    samples: u64,
    significance: f64,
    rng: &mut dyn RngCore,
) -> Result<TestReport> {
    let width = check_tuples(tuples)?;
    let prefix = tuples.iter().flatten().max().map_or(0, |&m| m + 1);
    let seed = rng.next_u64();
    let rows = run_chunked(
        seed,
        samples,
        |chunk_rng, count| {
            let mut rows = vec![BTreeMap::<TypeId, u64>::new(); tuples.len()];
            for _ in 0..count {
                let m = sampler.sample_prefix(prefix, chunk_rng)?;
                for (row, t) in rows.iter_mut().zip(tuples) {
                    *row.entry(labeled_type(&m.induced_substructure(t)?))
                        .or_insert(0) += 1;
                }
            }
            Ok(rows)
        },
        |mut a, b| {
            for (ra, rb) in a.iter_mut().zip(b) {
                for (id, c) in rb {
                    *ra.entry(id).or_insert(0) += c;
                }
            }
            a
        },
    )?
    .unwrap_or_else(|| vec![BTreeMap::new(); tuples.len()]);

    let (stat, df) = chisq::homogeneity(&rows);
    let tuple_list: Vec<String> = tuples.iter().map(|t| format!("{t:?}")).collect();
    Ok(TestReport::new(
        "exchangeability",
        stat,
        chisq::critical_value(df, significance),
        Rule::AtMost,
    )
    .with_p_value(chisq::p_value(stat, df))
    .with_param("tuples", tuple_list)
    .with_param("tuple_length", width)
    .with_param("prefix", prefix)
    .with_param("samples", samples)
    .with_param("significance", significance)
    .with_param("df", df)
    .with_param("source", sampler.label())
    .with_param("seed", seed))
}

/// Two-sample chi-square on labeled-type frequencies of two samplers.
///
/// Passes when the samplers are distinguishable at `significance`.
pub fn test_distinguish_samplers(
    first: &dyn PrefixSampler,
    second: &dyn PrefixSampler,
    n: usize,
    samples: u64,
    significance: f64,
    rng: &mut dyn RngCore,
) -> Result<TestReport> {
    let a = estimate_frequencies(first, n, samples, rng)?;
    let b = estimate_frequencies(second, n, samples, rng)?;
    let (stat, df) = chisq::homogeneity(&[a.counts.clone(), b.counts.clone()]);
    let threshold = chisq::critical_value(df, significance);
    let report = TestReport::new("distinguish", stat, threshold, Rule::Above);
    let verdict = if report.passed() {
        "distinguishable"
    } else {
        "not distinguishable"
    };
    Ok(report
        .with_p_value(chisq::p_value(stat, df))
        .with_param("n", n)
        .with_param("samples", samples)
        .with_param("significance", significance)
        .with_param("df", df)
        .with_param("first", a.source)
        .with_param("second", b.source)
        .with_param("seeds", vec![a.seed, b.seed])
        .with_detail(verdict))
}

/// Whether `P` under `m^{W1}` and `m^{W2}` yields distinguishable `n`-type frequencies.
#[allow(clippy::too_many_arguments)]
pub fn test_distinguish(
    structure: &crate::borel::BorelStructure,
    m: &SampleableMeasure,
    w1: &Weight,
    w2: &Weight,
    n: usize,
    samples: u64,
    significance: f64,
    rng: &mut dyn RngCore,
) -> Result<TestReport> {
    let first = PushforwardSampler::new(structure.clone(), reweight(m, w1)?);
    let second = PushforwardSampler::new(structure.clone(), reweight(m, w2)?);
    test_distinguish_samplers(&first, &second, n, samples, significance, rng)
}

/// Samples `trials` prefixes of size `n` and checks that, within each, all
/// `k`-element induced substructures are isomorphic.
///
/// The statistic is the number of trials with a counterexample; the first one
/// found is reported in `detail`.
pub fn check_high_homogeneity_sampled(
    sampler: &dyn PrefixSampler,
    n: usize,
    k: usize,
    trials: u64,
    rng: &mut dyn RngCore,
) -> Result<TestReport> {
    if n > HH_PREFIX_BOUND {
        return Err(Error::BoundExceeded {
            what: "prefix size",
            value: n,
            bound: HH_PREFIX_BOUND,
        });
    }
    if k > BRUTE_FORCE_BOUND {
        return Err(Error::BoundExceeded {
            what: "subset size",
            value: k,
            bound: BRUTE_FORCE_BOUND,
        });
    }
    if k > n {
        return Err(Error::BoundExceeded {
            what: "subset size",
            value: k,
            bound: n,
        });
    }
    let mut failures = 0u64;
    let mut first_counterexample: Option<String> = None;
    for trial in 0..trials {
        let m = sampler.sample_prefix(n, rng)?;
        let mut subsets = (0..n).combinations(k);
        let Some(anchor_idx) = subsets.next() else {
            continue;
        };
        let anchor = m.induced_substructure(&anchor_idx)?;
        for idx in subsets {
            if !are_isomorphic(&anchor, &m.induced_substructure(&idx)?)? {
                failures += 1;
                if first_counterexample.is_none() {
                    first_counterexample = Some(format!(
                        "trial {trial}: subsets {anchor_idx:?} and {idx:?} induce non-isomorphic substructures of\n{m}"
                    ));
                }
                break;
            }
        }
    }
    let report = TestReport::new("high-homogeneity", failures as f64, 0.0, Rule::AtMost)
        .with_param("n", n)
        .with_param("k", k)
        .with_param("trials", trials)
        .with_param("source", sampler.label());
    Ok(match first_counterexample {
        Some(d) => report.with_detail(d),
        None => report,
    })
}

/// Two-proportion chi-square (2×2 homogeneity). Passes when the proportions differ.
pub fn test_proportions_differ(
    successes: [u64; 2],
    trials: [u64; 2],
    significance: f64,
) -> TestReport {
    let rows: Vec<BTreeMap<bool, u64>> = (0..2)
        .map(|i| {
            [(true, successes[i]), (false, trials[i] - successes[i])]
                .into_iter()
                .collect()
        })
        .collect();
    let (stat, df) = chisq::homogeneity(&rows);
    let estimates: Vec<f64> = (0..2)
        .map(|i| successes[i] as f64 / trials[i] as f64)
        .collect();
    TestReport::new(
        "proportions-differ",
        stat,
        chisq::critical_value(df, significance),
        Rule::Above,
    )
    .with_p_value(chisq::p_value(stat, df))
    .with_param("estimates", estimates)
    .with_param("trials", trials.to_vec())
    .with_param("significance", significance)
}

/// Edge density of `samples` independent `n`-vertex graphs from `sampler`.
/// Returns `(edges, pairs)` summed over samples.
pub fn edge_counts(
    sampler: &dyn PrefixSampler,
    n: usize,
    samples: u64,
    rng: &mut dyn RngCore,
) -> Result<(u64, u64)> {
    let seed = rng.next_u64();
    let pairs = (n * n.saturating_sub(1) / 2) as u64;
    let edges = run_chunked(
        seed,
        samples,
        |chunk_rng, count| {
            (0..count).try_fold(0u64, |acc, _| {
                Ok(acc + edge_count(&sampler.sample_prefix(n, chunk_rng)?) as u64)
            })
        },
        |a, b| a + b,
    )?
    .unwrap_or(0);
    Ok((edges, pairs * samples))
}

/// Whether an observed proportion lies within `z` binomial standard errors of `p`.
pub fn test_binomial_proportion(successes: u64, trials: u64, p: f64, z: f64) -> TestReport {
    let estimate = successes as f64 / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    let stat = if se > 0.0 {
        (estimate - p).abs() / se
    } else if estimate == p {
        0.0
    } else {
        f64::INFINITY
    };
    TestReport::new("binomial-proportion", stat, z, Rule::AtMost)
        .with_param("estimate", estimate)
        .with_param("p", p)
        .with_param("trials", trials)
}

/// JSON summary of a frequency table.
pub fn table_json(table: &FrequencyTable) -> serde_json::Value {
    let counts: serde_json::Map<String, serde_json::Value> = table
        .counts
        .iter()
        .map(|(id, c)| (id.to_hex(), json!(c)))
        .collect();
    json!({
        "n": table.n,
        "total": table.total,
        "source": table.source,
        "seed": table.seed,
        "counts": counts,
    })
}
