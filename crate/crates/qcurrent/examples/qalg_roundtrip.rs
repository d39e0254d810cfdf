//! Loading the built-in `.qalg` definitions, printing them back, and
//! checking the parameter maps between the additive and multiplicative
//! algebras.
//!
//! ```text
//! cargo run --example qalg_roundtrip
//! ```

use std::error::Error;

use qcurrent::dsl::{
    check_parity, check_reciprocity, fuzz::random_spec_source, parse_document, parse_spec, print_document,
    print_spec, verify_param_map, ParamMap, DEF1_SOURCE, UQ_SOURCE,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MAP_TOL: f64 = 1e-10;

fn main() -> Result<(), Box<dyn Error>> {
    let doc = parse_document(UQ_SOURCE)?;
    let printed = print_document(&doc);
    println!("{printed}");
    println!("round trip preserves the document: {}", parse_document(&printed)? == doc);

    let def1 = parse_spec(DEF1_SOURCE)?;
    check_parity(&def1)?;
    check_reciprocity(&def1)?;
    println!(
        "{}: {} currents, {} relations, {} families",
        def1.name,
        def1.currents.len(),
        def1.relations.len(),
        def1.family_count()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let source = random_spec_source(&mut rng);
    let spec = parse_spec(&source)?;
    println!("random spec survives printing: {}", parse_spec(&print_spec(&spec))? == spec);

    for (name, map) in [("raising", ParamMap::raising()), ("lowering", ParamMap::lowering()), ("degeneration", ParamMap::degeneration())] {
        let report = verify_param_map(&def1, &doc.algebra, &map, 50, &mut rng)?;
        let relations: Vec<String> = report.relations.iter().map(|r| format!("{} -> {}", r.src, r.dst)).collect();
        println!("{name}: {} [{}] max error {:.2e}", if report.passes(MAP_TOL) { "pass" } else { "FAIL" }, relations.join(", "), report.max_error());
        for t in &report.transports {
            println!("  delta transport for {}: J = {:.6}", t.current, t.constant);
        }
    }
    Ok(())
}
