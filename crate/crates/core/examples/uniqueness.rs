//! Chi-square test that every reduct gives uniform labeled types, under two
//! different measures.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use exchstruct::borel::{reduct_structure, PushforwardSampler};
use exchstruct::measures::SampleableMeasure;
use exchstruct::reducts::ReductKind;
use exchstruct::typestats::{enumerate_types, estimate_frequencies, test_uniformity};

fn main() -> exchstruct::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for m in [SampleableMeasure::StdNormal, SampleableMeasure::Uniform01] {
        for kind in ReductKind::ALL {
            let sampler = PushforwardSampler::new(reduct_structure(kind), m.clone());
            let (expected, _) = enumerate_types(kind, 4)?;
            let table = estimate_frequencies(&sampler, 4, 50_000, &mut rng)?;
            println!(
                "{kind} / {m:?}: {}",
                test_uniformity(&table, &expected, 0.001)?
            );
        }
    }
    Ok(())
}
