//! Exact checks of the symmetric polynomial identity.
//!
//! The diagonal table `a_00 = a_11 = 1`, `a_01 = a_10 = 0` gives
//! `♠(λ) = λ² + (1 − λ)²`, which expands to `2λ² − 2λ + 1`.

use std::time::Instant;

use exchstruct::lemmas::{
    beta_expand, beta_formula, eval_spade, spread_check, verify_lemmas, ExponentVector,
    LambdaPoint, SymCoeffTable,
};

fn main() -> exchstruct::Result<()> {
    let table = SymCoeffTable::from_json_str(
        r#"{"n":2, "l":1, "a": {"00":"1","01":"0","10":"0","11":"1"}}"#,
    )?;
    let lambda = LambdaPoint::from_grid(&[1, 3], 4)?;
    println!("spade at {lambda} = {}", eval_spade(&table, &lambda)?);

    for e in ExponentVector::all(2, 1) {
        let beta = beta_formula(&table, &e)?;
        println!(
            "{e}: formula {} (C = {}, divided {}), expansion {}",
            beta.raw,
            beta.multinomial,
            beta.normalized,
            beta_expand(&table, &e)?
        );
    }

    for r in [4, 10, 40] {
        let s = spread_check(&table, r)?;
        println!(
            "resolution {r}: {} distinct values over {} points",
            s.distinct, s.points
        );
    }

    let start = Instant::now();
    let report = verify_lemmas(4, 3, 200, 0)?;
    for check in &report.checks {
        println!(
            "{:<32} {:>6} cases  {}",
            check.identity,
            check.cases,
            if check.passed { "ok" } else { "FAILED" }
        );
    }
    println!("verified in {:.2?}", start.elapsed());
    Ok(())
}
