//! Represent an order as a subset of `Z^2` under the lexicographic order.
//!
//! ```bash
//! cargo run --example lexrep
//! ```

use presburger::lexrep::{construct_lex_rep, synthesize_spine, verify_lex_rep};
use presburger::orderanalysis::catalog;

fn main() -> presburger::error::Result<()> {
    for name in ["finite5", "omega", "omega_plus_omega_star", "lex_omega2", "growing_boxes"] {
        let i = catalog::get(name).expect("catalog entry");
        let spine = synthesize_spine(&i)?;
        let rep = construct_lex_rep(&i)?;
        let v = verify_lex_rep(&i, &rep, 100)?;
        println!("{name}: spine modulus {}, set in Z^{}", spine.modulus, rep.arity);
        for l in &rep.set.pieces {
            println!("  {l}");
        }
        println!("  verified: {} ({} galaxies)", v.passed, v.galaxies_compared);
    }
    Ok(())
}
