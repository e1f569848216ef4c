//! Draws a few prefixes from the normal pushforward of betweenness and prints them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use exchstruct::borel::{builtin, sample_prefix};
use exchstruct::finstruct::{labeled_type, write_structure};
use exchstruct::measures::SampleableMeasure;

fn main() -> exchstruct::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let p = builtin("betweenness")?;
    for _ in 0..3 {
        let m = sample_prefix(&p, &SampleableMeasure::StdNormal, 4, &mut rng)?;
        print!("{}", write_structure(&m));
        println!("type {}\n", labeled_type(&m).to_hex());
    }
    Ok(())
}
