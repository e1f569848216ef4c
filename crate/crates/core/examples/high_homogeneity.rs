//! Sampled high-homogeneity checks. Reducts pass for every k; the random graph
//! and unary-split do not.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use exchstruct::borel::{reduct_structure, unary_split, ErdosRenyi, PushforwardSampler};
use exchstruct::measures::SampleableMeasure;
use exchstruct::reducts::ReductKind;
use exchstruct::typestats::check_high_homogeneity_sampled;

fn main() -> exchstruct::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for kind in ReductKind::ALL {
        let s = PushforwardSampler::new(reduct_structure(kind), SampleableMeasure::StdNormal);
        for k in [2, 3] {
            let r = check_high_homogeneity_sampled(&s, 8, k, 50, &mut rng)?;
            println!("{kind} k={k}: {:?}", r.decision);
        }
    }
    let er = check_high_homogeneity_sampled(&ErdosRenyi::new(0.5)?, 10, 2, 50, &mut rng)?;
    println!(
        "erdos-renyi k=2: {:?}, {} failing trials",
        er.decision, er.statistic
    );
    let split = PushforwardSampler::new(unary_split(), SampleableMeasure::StdNormal);
    let us = check_high_homogeneity_sampled(&split, 8, 1, 50, &mut rng)?;
    println!(
        "unary-split k=1: {:?}, {} failing trials",
        us.decision, us.statistic
    );
    Ok(())
}
