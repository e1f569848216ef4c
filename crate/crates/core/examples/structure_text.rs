//! Parses a structure from text, then prints its types and automorphism count.

use exchstruct::finstruct::{
    automorphism_group, is_highly_homogeneous_finite, labeled_type, parse_structure,
    unlabeled_type, Permutation,
};

const PENTAGON: &str = "\
signature E/2
size 5
E: (0,1) (1,0) (1,2) (2,1) (2,3) (3,2) (3,4) (4,3) (4,0) (0,4)
";

fn main() -> exchstruct::Result<()> {
    let c5 = parse_structure(PENTAGON)?;
    println!("labeled   {}", labeled_type(&c5).to_hex());
    println!("unlabeled {}", unlabeled_type(&c5)?.to_hex());
    println!("automorphisms: {}", automorphism_group(&c5)?.len());

    let relabeled = c5.apply_permutation(&Permutation::new(vec![2, 0, 4, 1, 3])?)?;
    println!(
        "same labeled type after relabeling: {}",
        labeled_type(&relabeled) == labeled_type(&c5)
    );
    println!(
        "same unlabeled type: {}",
        unlabeled_type(&relabeled)? == unlabeled_type(&c5)?
    );
    for k in 1..=5 {
        println!(
            "k = {k}: highly homogeneous {}",
            is_highly_homogeneous_finite(&c5, k)?
        );
    }
    Ok(())
}
