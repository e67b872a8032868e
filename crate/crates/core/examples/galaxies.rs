//! Order types of galaxies: points at finite distance from each other.
//!
//! ```bash
//! cargo run --example galaxies
//! ```

use presburger::orderanalysis::{catalog, Analyzer};

fn main() -> presburger::error::Result<()> {
    for (name, points) in [
        ("omega_plus_omega_star", vec![vec![0], vec![1], vec![10], vec![11]]),
        ("zeta", vec![vec![0], vec![7]]),
        ("reverse_omega", vec![vec![3]]),
        ("growing_boxes", vec![vec![0, 0], vec![3, 1], vec![3, 9], vec![10, 10]]),
    ] {
        let i = catalog::get(name).expect("catalog entry");
        let a = Analyzer::new(&i)?;
        for p in points {
            println!("{name:22} {p:?}: {}", a.galaxy_type(&p)?);
        }
    }
    Ok(())
}
