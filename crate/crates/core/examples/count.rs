//! Count natural solutions of `A l = u`.
//!
//! ```bash
//! cargo run --example count
//! ```

use presburger::counting::{count_solutions, has_infinite_fibres, parse_matrix, parse_vector, CountingInstance};

fn main() -> presburger::error::Result<()> {
    for (a, u) in [("1,1", "5"), ("1,2,3", "10"), ("1,1;0,1", "6,2"), ("1,-1", "3"), ("2", "3")] {
        let m = parse_matrix(a)?;
        let inst = CountingInstance::new(m.clone(), parse_vector(u)?)?;
        println!("A = [{a}]  u = ({u})  infinite fibres: {:5}  count: {}", has_infinite_fibres(&m)?, count_solutions(&inst)?);
    }
    Ok(())
}
