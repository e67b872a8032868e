//! The built-in interpretations and their JSON form.
//!
//! ```bash
//! cargo run --example catalog
//! ```

use presburger::interp::Interpretation;
use presburger::orderanalysis::catalog;

fn main() -> presburger::error::Result<()> {
    for i in catalog::catalog() {
        let json = i.to_json();
        let back = Interpretation::from_json_str(&json.to_string())?;
        assert_eq!(back, i);
        println!("{}", serde_json::to_string_pretty(&json).expect("json"));
    }
    let lex = catalog::get("lex_omega2").expect("catalog entry");
    let c = lex.compile()?;
    println!("lex_omega2 on [0,2]^2 in order: {:?}", {
        let mut pts = c.domain_points(2)?;
        c.sort(&mut pts)?;
        pts
    });
    Ok(())
}
