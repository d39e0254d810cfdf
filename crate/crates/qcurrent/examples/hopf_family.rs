//! Coproducts, antipodes and shifts on the family of algebras indexed by
//! central levels, and the axioms they satisfy.
//!
//! ```text
//! cargo run --example hopf_family
//! ```

use std::error::Error;

use qcurrent::dsl::{parse_spec, DEF1_SOURCE};
use qcurrent::hopf::{
    antipode, coproduct, verify_family_axiom, Axiom, Direction, ExchangeTable, FamilyLevels, Gen, HopfDomain,
    Rapidity, Status, Symbol, TensorWord, BASE_INDEX,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-8;

fn main() -> Result<(), Box<dyn Error>> {
    let table = ExchangeTable::from_spec(&parse_spec(DEF1_SOURCE)?)?;
    let e = TensorWord::generator(Symbol::new(Gen::E, Rapidity::var(0), BASE_INDEX));

    for levels in [FamilyLevels::constant(0, 5), FamilyLevels::new(vec![0, 1, 2, 0, 1])] {
        println!("levels {levels}");
        println!("  Delta+(E) = {}", coproduct(Direction::Plus, &e, 0, &levels)?);
        println!("  S+(E) = {}", antipode(Direction::Plus, &e, 0, &levels)?);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for axiom in Axiom::ALL {
            let r = verify_family_axiom(axiom, &levels, &table, &HopfDomain::default(), 20, TOL, &mut rng);
            let verdict = match r.status {
                Status::Pass => "pass".to_string(),
                Status::NotChecked => "not checked".to_string(),
                Status::Fail => format!("FAIL, max error {:.2e}", r.max_error()),
            };
            println!("  {}: {verdict}", axiom.id());
        }
    }
    Ok(())
}
