//! Counts labeled types of each reduct of `(Q, <)` on small prefixes.

use exchstruct::reducts::ReductKind;
use exchstruct::typestats::enumerate_types;

fn main() -> exchstruct::Result<()> {
    print!("{:<12}", "n");
    for n in 1..=6 {
        print!("{n:>6}");
    }
    println!();
    for kind in ReductKind::ALL {
        print!("{:<12}", kind.name());
        for n in 1..=6 {
            print!("{:>6}", enumerate_types(kind, n)?.1);
        }
        println!();
    }
    Ok(())
}
