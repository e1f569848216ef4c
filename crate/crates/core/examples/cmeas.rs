//! Event probabilities under reweighting: the coefficient table of an event,
//! its exact value at the part masses, and a Monte Carlo estimate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use exchstruct::lemmas::{
    cmeas_table, mc_event_prob, reweighted_event_prob, EventKind, LambdaPoint,
};
use exchstruct::measures::SampleableMeasure;
use exchstruct::measures::Weight;

fn main() -> exchstruct::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let w = Weight::from_json_str(
        r#"{"parts": [[["-inf", -1]], [[-1, 0]], [[0, "inf"]]], "masses": ["1/5", "3/10", "1/2"]}"#,
    )?;
    let lambda = LambdaPoint::from_weight(&w)?;
    for event in EventKind::ALL {
        let table = cmeas_table(&SampleableMeasure::StdNormal, w.parts(), event, 3)?;
        let exact = reweighted_event_prob(&table, &lambda)?;
        let mc = mc_event_prob(
            &SampleableMeasure::StdNormal,
            &w,
            event,
            3,
            100_000,
            &mut rng,
        )?;
        println!(
            "{event}: exact {exact} ({:.4}), monte carlo {mc:.4}",
            exchstruct::rational::to_f64(&exact)
        );
    }
    Ok(())
}
