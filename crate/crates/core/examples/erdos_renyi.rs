//! Edge densities of `G(N, p)` prefixes and a test that two densities differ.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use exchstruct::borel::ErdosRenyi;
use exchstruct::typestats::{edge_counts, test_binomial_proportion, test_proportions_differ};

fn main() -> exchstruct::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut counts = Vec::new();
    for p in [0.3, 0.5] {
        let (edges, pairs) = edge_counts(&ErdosRenyi::new(p)?, 50, 200, &mut rng)?;
        println!("p = {p}: density {:.4}", edges as f64 / pairs as f64);
        println!("  {}", test_binomial_proportion(edges, pairs, p, 3.0));
        counts.push((edges, pairs));
    }
    println!(
        "{}",
        test_proportions_differ(
            [counts[0].0, counts[1].0],
            [counts[0].1, counts[1].1],
            0.001
        )
    );
    Ok(())
}
