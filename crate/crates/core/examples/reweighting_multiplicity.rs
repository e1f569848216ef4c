//! Reweighting leaves the order reduct alone but moves the frequency of the
//! unary predicate in unary-split, so the latter carries many invariant measures.

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use exchstruct::borel::{induce, reduct_structure, unary_split, PushforwardSampler};
use exchstruct::finstruct::labeled_type;
use exchstruct::measures::{reweight, SampleableMeasure, Weight};
use exchstruct::reducts::ReductKind;
use exchstruct::typestats::{estimate_frequencies, test_distinguish};

fn main() -> exchstruct::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let order = reduct_structure(ReductKind::Order);
    let split = unary_split();
    let below = labeled_type(&induce(&order, &[0.0, 1.0])?);
    let holds = labeled_type(&induce(&split, &[1.0])?);
    let weights: Vec<Weight> = [3, 5, 7]
        .iter()
        .map(|&k| Weight::split_at(0.0, BigRational::new(k.into(), 10.into())))
        .collect::<exchstruct::Result<_>>()?;
    for w in &weights {
        let m = reweight(&SampleableMeasure::StdNormal, w)?;
        let f_order = estimate_frequencies(
            &PushforwardSampler::new(order.clone(), m.clone()),
            2,
            50_000,
            &mut rng,
        )?;
        let f_split = estimate_frequencies(
            &PushforwardSampler::new(split.clone(), m),
            1,
            50_000,
            &mut rng,
        )?;
        println!(
            "{}: P(0 < 1) = {:.4}, P(R(0)) = {:.4}",
            w.to_json(),
            f_order.frequency(&below),
            f_split.frequency(&holds)
        );
    }
    let report = test_distinguish(
        &split,
        &SampleableMeasure::StdNormal,
        &weights[0],
        &weights[1],
        1,
        10_000,
        0.001,
        &mut rng,
    )?;
    println!("{report}");
    Ok(())
}
