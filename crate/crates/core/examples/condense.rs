//! Condensation: collapse every galaxy to its lexicographically least point.
//!
//! ```bash
//! cargo run --example condense
//! ```

use presburger::orderanalysis::{catalog, Analyzer};

fn main() -> presburger::error::Result<()> {
    for name in ["omega", "omega_plus_omega_star", "lex_omega2", "growing_boxes", "zeta"] {
        let i = catalog::get(name).expect("catalog entry");
        let a = Analyzer::new(&i)?;
        let c = a.condense()?;
        let pts = c.decomposition.enumerate(6);
        println!("{name:22} dimension {}  representatives in [0,6]^{}: {pts:?}", c.dimension, i.dim);
    }

    // Splitting Z galaxies in two gives zeta two points after condensation.
    let zeta = catalog::get("zeta").expect("catalog entry");
    let c = Analyzer::new(&zeta)?.condense_with(true)?;
    println!("zeta, split: {:?}", c.decomposition.enumerate(6));
    Ok(())
}
