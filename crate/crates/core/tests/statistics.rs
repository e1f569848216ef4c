use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use exchstruct::borel::{
    induce, reduct_structure, unary_split, ErdosRenyi, PrefixSampler, PushforwardSampler,
};
use exchstruct::finstruct::{labeled_type, FinStructure};
use exchstruct::lemmas::{
    cmeas_table, mc_event_prob, reweighted_event_prob, EventKind, LambdaPoint,
};
use exchstruct::measures::{reweight, Interval, IntervalUnion, SampleableMeasure, Weight};
use exchstruct::montecarlo::with_workers;
use exchstruct::rational::to_f64;
use exchstruct::reducts::ReductKind;
use exchstruct::typestats::chisq::{exact_multinomial, goodness_of_fit, p_value};
use exchstruct::typestats::{
    enumerate_types, estimate_frequencies, test_exchangeability, test_uniformity,
};
use exchstruct::Result;

fn normal(kind: ReductKind) -> PushforwardSampler {
    PushforwardSampler::new(reduct_structure(kind), SampleableMeasure::StdNormal)
}

/// Restricting an `n`-prefix to its first `n − 1` elements.
struct Restricted<'a> {
    inner: &'a dyn PrefixSampler,
}

impl PrefixSampler for Restricted<'_> {
    fn label(&self) -> String {
        format!("restrict({})", self.inner.label())
    }

    fn sample_prefix(&self, n: usize, rng: &mut dyn rand::RngCore) -> Result<FinStructure> {
        let m = self.inner.sample_prefix(n + 1, rng)?;
        m.induced_substructure(&(0..n).collect::<Vec<_>>())
    }
}

#[test]
fn marginals_are_projective() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for kind in [
        ReductKind::Betweenness,
        ReductKind::CircularOrder,
        ReductKind::Separation,
    ] {
        let inner = normal(kind);
        let restricted = Restricted { inner: &inner };
        let (expected, _) = enumerate_types(kind, 4).unwrap();
        let table = estimate_frequencies(&restricted, 4, 30_000, &mut rng).unwrap();
        let report = test_uniformity(&table, &expected, 0.001).unwrap();
        assert!(report.passed(), "{kind}: {report}");
    }
}

#[test]
fn catalog_samplers_are_exchangeable() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pairs: Vec<Vec<usize>> = vec![vec![0, 1], vec![1, 0], vec![2, 3], vec![3, 1]];
    let triples: Vec<Vec<usize>> = vec![vec![0, 1, 2], vec![2, 1, 0], vec![3, 0, 2]];
    let er = ErdosRenyi::new(0.3).unwrap();
    let split = PushforwardSampler::new(unary_split(), SampleableMeasure::StdNormal);
    let mut samplers: Vec<Box<dyn PrefixSampler>> = vec![Box::new(er), Box::new(split)];
    for kind in ReductKind::ALL {
        samplers.push(Box::new(normal(kind)));
    }
    for s in &samplers {
        for tuples in [&pairs, &triples] {
            let report = test_exchangeability(s.as_ref(), tuples, 20_000, 0.001, &mut rng).unwrap();
            assert!(report.passed(), "{}: {report}", s.label());
        }
    }
}

#[test]
fn unary_marginal_equals_measure_of_the_set() {
    // The frequency of R(0) is m([0, ∞)) under the reweighted measure.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let w = Weight::split_at(0.5, BigRational::new(2.into(), 5.into())).unwrap();
    let m = reweight(&SampleableMeasure::StdNormal, &w).unwrap();
    let target = m.interval_prob(&Interval::at_least(0.0).unwrap().into());
    let sampler = PushforwardSampler::new(unary_split(), m);
    let samples = 100_000;
    let holds = labeled_type(&induce(&unary_split(), &[1.0]).unwrap());
    let f = estimate_frequencies(&sampler, 1, samples, &mut rng)
        .unwrap()
        .frequency(&holds);
    let sigma = (target * (1.0 - target) / samples as f64).sqrt();
    assert!((f - target).abs() <= 3.0 * sigma, "{f} vs {target}");
}

#[test]
fn chi_square_agrees_with_exact_multinomial_on_small_totals() {
    // Two cells are too discrete to compare: with an odd total the exact
    // p-value of the most balanced split is 1.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..60 {
        let cells = rng.random_range(3..=4usize);
        let total = rng.random_range(60..=200u64);
        let probs = vec![1.0 / cells as f64; cells];
        let mut observed = vec![0u64; cells];
        for _ in 0..total {
            observed[rng.random_range(0..cells)] += 1;
        }
        let (exact, _) = exact_multinomial(&observed, &probs, 0.05).unwrap();
        let approx = p_value(goodness_of_fit(&observed, &probs), cells - 1);
        assert!(
            (exact - approx).abs() < 0.1,
            "{observed:?}: exact {exact} vs {approx}"
        );
        if (approx - 0.05).abs() > 0.02 {
            assert_eq!(
                exact < 0.05,
                approx < 0.05,
                "{observed:?}: exact {exact} vs {approx}"
            );
        }
    }
}

#[test]
fn exact_route_is_used_for_small_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (expected, _) = enumerate_types(ReductKind::Betweenness, 3).unwrap();
    let table = estimate_frequencies(&normal(ReductKind::Betweenness), 3, 150, &mut rng).unwrap();
    let report = test_uniformity(&table, &expected, 0.001).unwrap();
    assert_eq!(report.params["method"], "exact-multinomial");
    assert!(report.passed(), "{report}");
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let sampler = normal(ReductKind::Separation);
    let table = |workers| {
        with_workers(workers, || {
            estimate_frequencies(&sampler, 5, 20_000, &mut ChaCha8Rng::seed_from_u64(6)).unwrap()
        })
    };
    let one = table(1);
    assert_eq!(one, table(3));
    assert_eq!(one, table(8));

    let w = Weight::split_at(0.0, BigRational::new(1.into(), 4.into())).unwrap();
    let mc = |workers| {
        with_workers(workers, || {
            mc_event_prob(
                &SampleableMeasure::StdNormal,
                &w,
                EventKind::SameSignPairs,
                3,
                50_000,
                &mut ChaCha8Rng::seed_from_u64(7),
            )
            .unwrap()
        })
    };
    assert_eq!(mc(1).to_bits(), mc(5).to_bits());
}

/// Random cut points including 0, so every part has a sign.
fn random_weight(rng: &mut impl Rng) -> Weight {
    let mut cuts = vec![0.0];
    for _ in 0..rng.random_range(0..=2) {
        let c: f64 = rng.random_range(-2.0..2.0);
        cuts.push((c * 100.0).round() / 100.0);
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut parts: Vec<IntervalUnion> = vec![Interval::below(cuts[0]).unwrap().into()];
    for pair in cuts.windows(2) {
        parts.push(Interval::closed_open(pair[0], pair[1]).unwrap().into());
    }
    parts.push(Interval::at_least(*cuts.last().unwrap()).unwrap().into());
    let raw: Vec<i64> = parts.iter().map(|_| rng.random_range(1..=9)).collect();
    let total: i64 = raw.iter().sum();
    let masses = raw
        .iter()
        .map(|&r| BigRational::new(r.into(), total.into()))
        .collect();
    Weight::exact(parts, masses).unwrap()
}

#[test]
fn monte_carlo_matches_analytic_event_probabilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let samples = 100_000u64;
    for _ in 0..5 {
        let w = random_weight(&mut rng);
        let lambda = LambdaPoint::from_weight(&w).unwrap();
        for event in EventKind::ALL {
            for n in [2, 3] {
                let table =
                    cmeas_table(&SampleableMeasure::StdNormal, w.parts(), event, n).unwrap();
                let p = to_f64(&reweighted_event_prob(&table, &lambda).unwrap());
                let mc = mc_event_prob(
                    &SampleableMeasure::StdNormal,
                    &w,
                    event,
                    n,
                    samples,
                    &mut rng,
                )
                .unwrap();
                let bound = 3.0 * (p * (1.0 - p) / samples as f64).sqrt();
                assert!(
                    (mc - p).abs() <= bound,
                    "{event} n={n} {}: mc {mc} vs {p}",
                    w.to_json()
                );
            }
        }
    }
}
