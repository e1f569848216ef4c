//! Chi-square statistics.
//!
//! Critical values and p-values use the Wilson–Hilferty cube-root normal
//! approximation. For small multinomial tables the exact null distribution of
//! the chi-square statistic is enumerated instead.

use std::collections::{BTreeMap, BTreeSet};

use statrs::function::gamma::ln_gamma;

use crate::measures::{normal_cdf, normal_quantile};

/// Largest number of outcomes the exact multinomial enumeration will visit.
pub const EXACT_OUTCOME_LIMIT: u64 = 2_000_000;

/// Largest sample total routed to the exact test.
pub const EXACT_TOTAL_LIMIT: u64 = 200;

/// Upper `significance` critical value of chi-square with `df` degrees of freedom.
pub fn critical_value(df: usize, significance: f64) -> f64 {
    if df == 0 {
        return 0.0;
    }
    let k = df as f64;
    let h = 2.0 / (9.0 * k);
    let z = normal_quantile(1.0 - significance);
    k * (1.0 - h + z * h.sqrt()).max(0.0).powi(3)
}

/// `P(X > x)` for `X ~ chi-square(df)`.
pub fn p_value(x: f64, df: usize) -> f64 {
    if df == 0 {
        return 1.0;
    }
    if !x.is_finite() {
        return 0.0;
    }
    if x <= 0.0 {
        return 1.0;
    }
    let k = df as f64;
    let h = 2.0 / (9.0 * k);
    let z = ((x / k).cbrt() - (1.0 - h)) / h.sqrt();
    normal_cdf(-z)
}

/// Pearson's statistic against expected cell probabilities.
pub fn goodness_of_fit(observed: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = observed.iter().sum();
    observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}

/// Homogeneity statistic for a contingency table given as one count map per row.
/// Returns `(statistic, degrees of freedom)` over the columns observed anywhere.
pub fn homogeneity<K: Ord + Clone>(rows: &[BTreeMap<K, u64>]) -> (f64, usize) {
    let columns: BTreeSet<K> = rows.iter().flat_map(|r| r.keys().cloned()).collect();
    let row_totals: Vec<u64> = rows.iter().map(|r| r.values().sum()).collect();
    let grand: u64 = row_totals.iter().sum();
    let live_rows = row_totals.iter().filter(|&&t| t > 0).count();
    if columns.len() < 2 || live_rows < 2 {
        return (0.0, 0);
    }
    let col_totals: Vec<u64> = columns
        .iter()
        .map(|c| rows.iter().map(|r| r.get(c).copied().unwrap_or(0)).sum())
        .collect();
    let mut stat = 0.0;
    for (row, &rt) in rows.iter().zip(&row_totals) {
        if rt == 0 {
            continue;
        }
        for (c, &ct) in columns.iter().zip(&col_totals) {
            let e = rt as f64 * ct as f64 / grand as f64;
            let d = row.get(c).copied().unwrap_or(0) as f64 - e;
            stat += d * d / e;
        }
    }
    (stat, (live_rows - 1) * (columns.len() - 1))
}

/// Number of compositions of `total` into `cells` nonnegative parts.
pub fn outcome_count(total: u64, cells: usize) -> u64 {
    if cells == 0 {
        return u64::from(total == 0);
    }
    let r = (cells - 1) as u64;
    let mut acc: u128 = 1;
    for i in 1..=r {
        acc = acc * (total + i) as u128 / i as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Exact null distribution of Pearson's statistic under a multinomial law.
///
/// Returns `(P(X² ≥ observed), critical)` where `critical` is the smallest
/// attainable statistic value `c` with `P(X² > c) ≤ significance`. `None` when
/// the outcome space exceeds [`EXACT_OUTCOME_LIMIT`].
pub fn exact_multinomial(observed: &[u64], probs: &[f64], significance: f64) -> Option<(f64, f64)> {
    let total: u64 = observed.iter().sum();
    if outcome_count(total, observed.len()) > EXACT_OUTCOME_LIMIT {
        return None;
    }
    let stat_obs = goodness_of_fit(observed, probs);
    let ln_fact: Vec<f64> = (0..=total).map(|k| ln_gamma(k as f64 + 1.0)).collect();
    let ln_probs: Vec<f64> = probs.iter().map(|p| p.ln()).collect();

    let mut outcomes: Vec<(f64, f64)> = Vec::new();
    let mut cell = vec![0u64; observed.len()];
    enumerate(&mut cell, 0, total, &mut |counts| {
        let ln_p = ln_fact[total as usize]
            + counts
                .iter()
                .zip(&ln_probs)
                .map(|(&c, &lp)| c as f64 * lp - ln_fact[c as usize])
                .sum::<f64>();
        outcomes.push((goodness_of_fit(counts, probs), ln_p.exp()));
    });

    let tie = 1e-9 * (1.0 + stat_obs.abs());
    let p_at_least: f64 = outcomes
        .iter()
        .filter(|(s, _)| *s >= stat_obs - tie)
        .map(|(_, p)| p)
        .sum();

    outcomes.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Walk down from the largest statistic, accumulating the upper tail.
    let mut tail = 0.0;
    let mut critical = outcomes.last().map(|o| o.0).unwrap_or(0.0);
    let mut i = outcomes.len();
    while i > 0 {
        let value = outcomes[i - 1].0;
        let mut j = i;
        let mut mass = 0.0;
        while j > 0 && outcomes[j - 1].0 >= value - 1e-9 * (1.0 + value.abs()) {
            mass += outcomes[j - 1].1;
            j -= 1;
        }
        // `tail` is P(X² > value).
        if tail <= significance {
            critical = value;
        } else {
            break;
        }
        tail += mass;
        i = j;
    }
    Some((p_at_least.min(1.0), critical))
}

fn enumerate(cell: &mut Vec<u64>, at: usize, left: u64, visit: &mut impl FnMut(&[u64])) {
    if at + 1 == cell.len() {
        cell[at] = left;
        visit(cell);
        return;
    }
    for c in 0..=left {
        cell[at] = c;
        enumerate(cell, at + 1, left - c, visit);
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;

    #[test]
    fn wilson_hilferty_close_to_tabulated_quantiles() {
        // Tabulated upper 0.001 quantiles.
        for (df, q) in [(2, 13.816), (5, 20.515), (10, 29.588), (23, 49.728)] {
            let c = critical_value(df, 0.001);
            // Cube-root approximation is conservative and loosest at small df.
            assert!((c - q).abs() / q < 0.03, "df {df}: {c} vs {q}");
        }
        assert_abs_diff_eq!(p_value(critical_value(7, 0.01), 7), 0.01, epsilon = 1e-9);
        assert_eq!(critical_value(0, 0.001), 0.0);
        assert_eq!(p_value(f64::INFINITY, 3), 0.0);
    }

    #[test]
    fn gof_reference_values() {
        let stat = goodness_of_fit(&[10, 20, 30], &[1.0 / 3.0; 3]);
        assert_abs_diff_eq!(stat, 10.0, epsilon = 1e-12);
    }

    #[test]
    fn homogeneity_of_identical_rows_is_zero() {
        let row: BTreeMap<u8, u64> = [(0, 10), (1, 30)].into_iter().collect();
        let (stat, df) = homogeneity(&[row.clone(), row]);
        assert_abs_diff_eq!(stat, 0.0);
        assert_eq!(df, 1);
        let lone: BTreeMap<u8, u64> = [(0, 5)].into_iter().collect();
        assert_eq!(homogeneity(&[lone.clone(), lone]), (0.0, 0));
    }

    #[test]
    fn homogeneity_2x2_matches_hand_computation() {
        // [[20, 30], [30, 20]]: every expected count is 25, each cell adds 1.
        let a: BTreeMap<u8, u64> = [(0, 20), (1, 30)].into_iter().collect();
        let b: BTreeMap<u8, u64> = [(0, 30), (1, 20)].into_iter().collect();
        let (stat, df) = homogeneity(&[a, b]);
        assert_abs_diff_eq!(stat, 4.0, epsilon = 1e-12);
        assert_eq!(df, 1);
    }

    #[test]
    fn outcome_counts() {
        assert_eq!(outcome_count(200, 2), 201);
        assert_eq!(outcome_count(200, 3), 20_301);
        assert_eq!(outcome_count(0, 4), 1);
    }

    #[test]
    fn exact_binomial_tail() {
        // 10 fair coin flips, observed 9 heads: X² = 6.4, attained by 9 or 1 heads
        // and exceeded by 10 or 0: P = 2 * (10 + 1) / 1024.
        let (p, _) = exact_multinomial(&[9, 1], &[0.5, 0.5], 0.05).unwrap();
        assert_abs_diff_eq!(p, 22.0 / 1024.0, epsilon = 1e-12);
        assert!(exact_multinomial(&[100, 100, 100, 100, 100], &[0.2; 5], 0.05).is_none());
    }

    #[test]
    fn exact_critical_value_controls_size() {
        let probs = [0.25, 0.25, 0.5];
        let (_, c) = exact_multinomial(&[10, 10, 20], &probs, 0.05).unwrap();
        // P(X² > c) under the null must be ≤ 0.05, checked by brute-force enumeration.
        let mut tail = 0.0;
        for a in 0..=40u64 {
            for b in 0..=40 - a {
                let obs = [a, b, 40 - a - b];
                let s = goodness_of_fit(&obs, &probs);
                if s > c + 1e-9 {
                    let lp = ln_gamma(41.0)
                        - ln_gamma(a as f64 + 1.0)
                        - ln_gamma(b as f64 + 1.0)
                        - ln_gamma((40 - a - b) as f64 + 1.0)
                        + (a + b) as f64 * 0.25f64.ln()
                        + (40 - a - b) as f64 * 0.5f64.ln();
                    tail += lp.exp();
                }
            }
        }
        assert!(tail <= 0.05 + 1e-12, "{tail}");
    }
}
