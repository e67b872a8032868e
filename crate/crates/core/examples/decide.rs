//! Decide Presburger sentences over the naturals.
//!
//! ```bash
//! cargo run --example decide
//! ```

use presburger::formula::parse;
use presburger::qelim::decide;

fn main() -> presburger::error::Result<()> {
    let sentences = [
        "forall x. exists y. y = x + x",
        "forall x. exists y. x = y + y",
        "forall x. exists y. x = y + y | x = y + y + 1",
        "exists x. x > 3 & x == 1 mod 4 & x == 2 mod 3",
        "forall x. forall y. x < y -> (exists z. x + z + 1 = y)",
    ];
    for s in sentences {
        println!("{:5}  {s}", decide(&parse(s)?)?);
    }
    Ok(())
}
