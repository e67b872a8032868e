//! Iterated condensation rank of every catalog entry.
//!
//! ```bash
//! cargo run --example rank
//! ```

use presburger::orderanalysis::{catalog, vd_rank};

fn main() -> presburger::error::Result<()> {
    for i in catalog::catalog() {
        let r = vd_rank(&i)?;
        let dims: Vec<usize> = r.chain.iter().map(|c| c.dimension).collect();
        println!("{:22} dim {}  rank {}  final size {}  dimensions {dims:?}", i.name, i.dim, r.rank, r.final_size);
    }
    Ok(())
}
