//! Check that an interpretation defines a strict linear order.
//!
//! ```bash
//! cargo run --example validate
//! ```

use presburger::interp::Interpretation;
use presburger::orderanalysis::catalog;

fn main() -> presburger::error::Result<()> {
    let mut all = catalog::catalog();
    all.push(catalog::broken());
    // Evens ascending, then odds ascending.
    all.push(Interpretation::from_strings(
        "evens_then_odds",
        1,
        "0 = 0",
        "x1 == 0 mod 2 & y1 == 1 mod 2 | x1 == y1 mod 2 & x1 < y1",
        None,
    )?);
    // Not total: incomparable parities.
    all.push(Interpretation::from_strings("partial", 1, "0 = 0", "x1 == y1 mod 2 & x1 < y1", None)?);
    for i in &all {
        let r = i.validate()?;
        let failed: Vec<&str> = r.axioms.iter().filter(|a| !a.holds).map(|a| a.axiom.as_str()).collect();
        if failed.is_empty() {
            println!("{:24} linear order", i.name);
        } else {
            println!("{:24} fails {}", i.name, failed.join(", "));
        }
    }
    Ok(())
}
