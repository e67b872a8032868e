//! Fit the counting function of `A` with a piecewise polynomial and check
//! its degree against `n - rank(A)`.
//!
//! ```bash
//! cargo run --example fit
//! ```

use presburger::counting::{degree_bound, fit_piecewise, parse_matrix, sample_box, verify_degree_bound};

fn main() -> presburger::error::Result<()> {
    for (a, d, hi) in [("1,1", 1, 20), ("1,1,1", 1, 20), ("2,2", 1, 20), ("1,2", 1, 30), ("1,1,0;0,1,1", 2, 10)] {
        let m = parse_matrix(a)?;
        let pp = fit_piecewise(&m, &sample_box(d, 0, hi))?;
        println!("A = [{a}]  bound {}  holds: {}", degree_bound(&m), verify_degree_bound(&m, &pp));
        for p in &pp.pieces {
            let signs = p.region.signs.as_ref().map_or(String::new(), |s| format!(" signs {s:?}"));
            println!("  u = {:?} mod {}{signs}: {}", p.region.residue, p.region.modulus, p.polynomial);
        }
    }
    Ok(())
}
