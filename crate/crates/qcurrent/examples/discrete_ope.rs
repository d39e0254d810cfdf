//! Exact operator products of the discrete vertex realizations.
//!
//! ```text
//! cargo run --example discrete_ope
//! ```

use std::error::Error;

use qcurrent::dsl::{parse_document, UQ_SOURCE};
use qcurrent::vertex::{verify_delta_bracket, verify_exchange, Realization};

const LIMIT_TOL: f64 = 1e-6;
const PAIRS: [(&str, &str); 9] = [
    ("X+", "X+"),
    ("X-", "X-"),
    ("psi+", "X+"),
    ("psi-", "X+"),
    ("psi+", "X-"),
    ("psi-", "X-"),
    ("psi+", "psi+"),
    ("psi-", "psi-"),
    ("psi+", "psi-"),
];

fn main() -> Result<(), Box<dyn Error>> {
    let doc = parse_document(UQ_SOURCE)?;
    for spec in &doc.realizations {
        let real = Realization::from_spec(spec)?;
        println!("realization {}", real.name);
        let a = real.vertex("X+")?.renamed("z")?;
        let b = real.vertex("X+")?.renamed("w")?;
        println!("  X+(z) X+(w) contraction: {}", real.contract(&a, &b)?.to_ratfunc()?);
        let mut holding = 0;
        for (x, y) in PAIRS {
            let check = verify_exchange(&real, &doc.algebra, x, y)?;
            if check.passes() {
                holding += 1;
            } else {
                println!("  {x}{y}: ratio / structure function = {}", check.quotient);
            }
        }
        println!("  exchange relations holding: {holding}/{}", PAIRS.len());
        let delta = verify_delta_bracket(&real, &doc.algebra, "X+", "X-")?;
        println!(
            "  [X+, X-]: ordering factor {}, {} poles, {}",
            delta.ordering,
            delta.poles.len(),
            if delta.passes(LIMIT_TOL) { "matches the delta terms" } else { "does not match the delta terms" }
        );
    }
    Ok(())
}
