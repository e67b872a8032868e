//! Disjoint fundamental decompositions of definable sets, and their dimension.
//!
//! ```bash
//! cargo run --example decompose
//! ```

use presburger::formula::parse;
use presburger::qelim::eliminate;
use presburger::semilinear::{Decomposition, Lattice, SemilinearSet, DEFAULT_MAX_PIECES};

fn main() -> presburger::error::Result<()> {
    for (text, vars) in [
        ("x <= y", &["x", "y"][..]),
        ("y = 2*x", &["x", "y"]),
        ("exists z. x = 3*z + 1 & x < 20", &["x"]),
        ("x + y = 5 | x = y", &["x", "y"]),
    ] {
        let q = eliminate(&parse(text)?)?;
        let d = Decomposition::of_formula(&q, vars, DEFAULT_MAX_PIECES)?;
        println!("{text}   (dimension {})", d.dimension());
        for l in &d.pieces {
            println!("  {l}");
        }
    }

    // Overlapping lattices become disjoint ones.
    let s = SemilinearSet::new(1, vec![Lattice::natural(vec![0], vec![vec![2]])?, Lattice::natural(vec![0], vec![vec![3]])?])?;
    let d = s.ito_decompose()?;
    println!("2N u 3N:");
    for l in &d.pieces {
        println!("  {l}");
    }
    Ok(())
}
