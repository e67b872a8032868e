//! Quantifier elimination: the result mentions only the free variables.
//!
//! ```bash
//! cargo run --example eliminate
//! ```

use presburger::formula::{parse, Assignment};
use presburger::qelim::{eliminate, simplify};

fn main() -> presburger::error::Result<()> {
    for text in [
        "exists y. x = y + y",
        "exists y. exists z. x = 3*y + 5*z",
        "forall y. y < x -> y < 4",
        "exists k. x = 2*k + 1 & k < y",
    ] {
        let f = parse(text)?;
        let q = simplify(&eliminate(&f)?);
        println!("{text}\n  ~> {q}");
        let shown: Vec<u64> = (0..12).filter(|&x| {
            let s = Assignment::new().with("x", x).with("y", 3);
            q.to_formula().and_then(|g| g.evaluate(&s)).unwrap_or(false)
        }).collect();
        println!("  holds for x in {shown:?} (y = 3)");
    }
    Ok(())
}
