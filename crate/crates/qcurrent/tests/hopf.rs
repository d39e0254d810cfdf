use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qcurrent::dsl::{parse_spec, DEF1_SOURCE};
use qcurrent::hopf::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-8;
const SAMPLES: usize = 50;

fn table() -> ExchangeTable {
    ExchangeTable::from_spec(&parse_spec(DEF1_SOURCE).unwrap()).unwrap()
}

fn at(g: Gen, base: u8, quarters: i64, level: i32, slot: u8) -> Symbol {
    Symbol { slot, gen: g, rap: Rapidity { base, quarters }, inverse: false, level }
}

fn single(g: Gen) -> TensorWord {
    TensorWord::generator(Symbol::new(g, Rapidity::var(0), BASE_INDEX))
}

fn run(axiom: Axiom, levels: &FamilyLevels) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    verify_family_axiom(axiom, levels, &table(), &HopfDomain::default(), SAMPLES, TOL, &mut rng)
}

fn syms(w: &TensorWord) -> Vec<Vec<Symbol>> {
    w.terms.iter().map(|t| t.syms.clone()).collect()
}

#[test]
fn coproduct_of_e_has_two_terms() {
    // c_2 = 1, c_3 = 2.
    let levels = FamilyLevels::new(vec![0, 0, 1, 2, 0]);
    let d = coproduct(Direction::Plus, &single(Gen::E), 0, &levels).unwrap();
    assert_eq!(d.slots, vec![2, 3]);
    assert_eq!(
        syms(&d),
        vec![vec![at(Gen::E, 0, 0, 2, 0)], vec![at(Gen::HMinus, 0, 1, 2, 0), at(Gen::E, 0, 2, 3, 1)]]
    );
    assert!(d.terms.iter().all(|t| t.coef == Coef::one()));
}

#[test]
fn minus_coproduct_of_f() {
    let levels = FamilyLevels::new(vec![0, 2, 1, 0, 0]);
    let d = coproduct(Direction::Minus, &single(Gen::F), 0, &levels).unwrap();
    assert_eq!(d.slots, vec![1, 2]);
    assert_eq!(
        syms(&d),
        vec![vec![at(Gen::F, 0, 0, 2, 1)], vec![at(Gen::F, 0, 2, 1, 0), at(Gen::HPlus, 0, 1, 2, 1)]]
    );
}

#[test]
fn central_element_is_additive() {
    let image = central_image(Direction::Plus, 2);
    assert_eq!(image, vec![(0, 2, 1), (1, 3, 1)]);
    let levels = FamilyLevels::new(vec![0, 0, 1, 0]);
    let total: i64 = image.iter().map(|(_, k, m)| m * levels.at(*k)).sum();
    assert_eq!(total, 1);
}

#[test]
fn eta_recursion() {
    let levels = FamilyLevels::new(vec![0, 2, 1, 0, 2]);
    let (eta, hbar) = (0.7, 0.3);
    assert_eq!(levels.eta(1, eta, hbar), eta);
    for n in 1..4 {
        let step = 1.0 / levels.eta(n + 1, eta, hbar) - 1.0 / levels.eta(n, eta, hbar);
        assert!((step - hbar * levels.at(n) as f64).abs() < 1e-14);
    }
}

#[test]
fn shift_read_off_from_counit() {
    let levels = FamilyLevels::new(vec![0, 2, 1, 2, 0]);
    let plus = tau_table(Direction::Plus, 2, &levels).unwrap();
    assert_eq!(plus[&Gen::E], (2, 3));
    assert_eq!(plus[&Gen::F], (0, 3));
    assert_eq!(plus[&Gen::HPlus], (-1, 3));
    assert_eq!(plus[&Gen::HMinus], (1, 3));
    let minus = tau_table(Direction::Minus, 2, &levels).unwrap();
    assert_eq!(minus[&Gen::E], (0, 1));
    assert_eq!(minus[&Gen::F], (2, 1));
    assert_eq!(minus[&Gen::HPlus], (1, 1));
    assert_eq!(minus[&Gen::HMinus], (-1, 1));
}

#[test]
fn super_product_sign() {
    let slots = vec![2, 3];
    let left = TensorWord::monomial(slots.clone(), Coef::one(), vec![at(Gen::E, 0, 0, 3, 1)]);
    let right = TensorWord::monomial(slots.clone(), Coef::one(), vec![at(Gen::E, 1, 0, 2, 0)]);
    assert_eq!(left.mul(&right).terms[0].coef, Coef::int(-1));
    let even = TensorWord::monomial(slots.clone(), Coef::one(), vec![at(Gen::HPlus, 0, 0, 3, 1)]);
    assert_eq!(even.mul(&right).terms[0].coef, Coef::one());
}

fn eval_single(nf: &NormalForm, levels: &FamilyLevels, u: f64, v: f64, hbar: f64, eta: f64) -> Complex64 {
    let t = table();
    let at = SamplePoint { rapidities: vec![u, v], hbar, eta, levels };
    let (_, coefs) = nf.iter().next().unwrap();
    coefs.iter().map(|c| t.eval_coef(c, &at).unwrap()).sum()
}

#[test]
fn reorders_cartan_past_raising_current() {
    let levels = FamilyLevels::new(vec![0, 1, 1, 0]);
    let w = TensorWord::monomial(vec![1], Coef::one(), vec![at(Gen::HMinus, 0, 0, 1, 0), at(Gen::E, 1, 0, 1, 0)]);
    let nf = normal_order(&w, &table(), &levels).unwrap();
    let key: Vec<_> = nf.keys().next().unwrap().clone();
    assert_eq!(key, vec![at(Gen::E, 1, 0, 1, 0), at(Gen::HMinus, 0, 0, 1, 0)]);
    let (u, v, hbar, eta) = (0.3, -0.2, 0.25, 0.8);
    let d = Complex64::new(u - v, 0.0);
    let i = Complex64::i();
    let shift = -i * hbar / 4.0; // c = 1 on the lower sign
    let want = (PI * eta * (d + i * hbar + shift)).cosh() / (PI * eta * (d - i * hbar + shift)).cosh();
    let got = eval_single(&nf, &levels, u, v, hbar, eta);
    assert!((got - want).norm() < 1e-12, "{got} vs {want}");
}

#[test]
fn normal_order_fixed_points() {
    let levels = FamilyLevels::constant(0, 5);
    let ordered = TensorWord::monomial(vec![2], Coef::one(), vec![at(Gen::E, 0, 0, 2, 0), at(Gen::E, 1, 0, 2, 0)]);
    let nf = normal_order(&ordered, &table(), &levels).unwrap();
    assert_eq!(nf.values().next().unwrap(), &vec![Coef::one()]);

    let swapped = TensorWord::monomial(vec![2], Coef::one(), vec![at(Gen::E, 1, 0, 2, 0), at(Gen::E, 0, 0, 2, 0)]);
    let nf = normal_order(&swapped, &table(), &levels).unwrap();
    let (key, coefs) = nf.iter().next().unwrap();
    assert_eq!(key, &vec![at(Gen::E, 0, 0, 2, 0), at(Gen::E, 1, 0, 2, 0)]);
    assert_eq!(coefs[0].factors.len(), 1);
    // E(v) E(u) = f(v, u) E(u) E(v) with f(v, u) = -cosh(πη(v-u+iħ))/cosh(πη(v-u-iħ)).
    let (u, v, hbar, eta) = (0.5, 0.1, 0.2, 1.0);
    let i = Complex64::i();
    let d = Complex64::new(v - u, 0.0);
    let want = -(PI * eta * (d + i * hbar)).cosh() / (PI * eta * (d - i * hbar)).cosh();
    assert!((eval_single(&nf, &levels, u, v, hbar, eta) - want).norm() < 1e-12);

    let again: TensorWord =
        TensorWord::monomial(vec![2], coefs[0].clone(), key.clone());
    assert_eq!(normal_order(&again, &table(), &levels).unwrap(), nf);
}

#[test]
fn inverse_pairs_cancel() {
    let levels = FamilyLevels::constant(1, 5);
    let h = at(Gen::HPlus, 0, 3, 2, 0);
    let w = TensorWord::monomial(vec![2], Coef::one(), vec![h.inverted(), at(Gen::E, 1, 0, 2, 0), h]);
    let nf = normal_order(&w, &table(), &levels).unwrap();
    assert_eq!(nf.keys().next().unwrap(), &vec![at(Gen::E, 1, 0, 2, 0)]);
    // H(a)^{-1} E(v) H(a) = f(a, v)^{-1} E(v) with a = u + 3iħ/4 and c = 1.
    let (u, v, hbar, eta) = (0.4, -0.3, 0.3, 0.9);
    let i = Complex64::i();
    let d = Complex64::new(u - v, 0.75 * hbar);
    let e2 = levels.eta(2, eta, hbar);
    let f = (PI * e2 * (d + i * hbar + i * hbar / 4.0)).cosh() / (PI * e2 * (d - i * hbar + i * hbar / 4.0)).cosh();
    let got = eval_single(&nf, &levels, u, v, hbar, eta);
    assert!((got - 1.0 / f).norm() < 1e-12, "{got} vs {}", 1.0 / f);
}

#[test]
fn raising_and_lowering_cannot_share_a_slot() {
    let levels = FamilyLevels::constant(0, 5);
    let w = TensorWord::monomial(vec![2], Coef::one(), vec![at(Gen::F, 0, 0, 2, 0), at(Gen::E, 1, 0, 2, 0)]);
    assert!(matches!(normal_order(&w, &table(), &levels), Err(RewriteError::Collision(..))));
}

#[test]
fn level_zero_family_satisfies_every_axiom() {
    let levels = FamilyLevels::constant(0, 5);
    for axiom in Axiom::ALL {
        let r = run(axiom, &levels);
        let expected = if axiom == Axiom::BracketHomomorphism { Status::NotChecked } else { Status::Pass };
        assert_eq!(r.status, expected, "{}: {:?}", axiom.id(), r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn counit_axioms_hold_for_all_levels() {
    for c in [vec![1; 5], vec![2; 5], vec![0, 2, 1, 2, 0]] {
        let levels = FamilyLevels::new(c);
        for dir in [Direction::Plus, Direction::Minus] {
            assert_eq!(run(Axiom::Counit(dir), &levels).status, Status::Pass);
        }
    }
}

#[test]
fn coproducts_are_homomorphisms_for_all_levels() {
    for c in [vec![1; 5], vec![2; 5], vec![0, 2, 1, 2, 0], vec![0, 1, 0, 2, 1]] {
        let levels = FamilyLevels::new(c);
        for dir in [Direction::Plus, Direction::Minus] {
            let r = run(Axiom::Homomorphism(dir), &levels);
            assert_eq!(r.checks.len(), 9);
            assert_eq!(r.status, Status::Pass, "{levels}: {:?}", r.failures().collect::<Vec<_>>());
            assert!(r.max_error() < 1e-12);
        }
    }
}

#[test]
fn antipode_on_e_leaves_a_residue_at_nonzero_level() {
    let levels = FamilyLevels::constant(1, 5);
    let r = run(Axiom::Antipode(Direction::Plus), &levels);
    assert_eq!(r.status, Status::Fail);
    let e = r.checks.iter().find(|c| c.subject == "E").unwrap();
    // -H-(u - iħ/4)^{-1} E(u - iħ/2) and H-(u + iħ/4)^{-1} E(u + iħ/2) sit at different arguments.
    assert_eq!(e.mismatch.as_deref(), Some("E(u-2ih/4; 3) H-(u-1ih/4; 3)^-1 survives only on the left side"));
    let f = r.checks.iter().find(|c| c.subject == "F").unwrap();
    assert!(f.passes(TOL));
}

#[test]
fn shift_morphisms_are_not_inverse_at_nonzero_level() {
    let levels = FamilyLevels::constant(1, 5);
    let w = single(Gen::E);
    let back = shift(Direction::Minus, &shift(Direction::Plus, &w, 0, &levels).unwrap(), 0, &levels).unwrap();
    assert_eq!(syms(&back), vec![vec![at(Gen::E, 0, 2, 2, 0)]]);
    let r = run(Axiom::ShiftInverse, &levels);
    assert_eq!(r.status, Status::Fail);
    let passing: Vec<_> = r.checks.iter().filter(|c| c.passes(TOL)).map(|c| c.subject.as_str()).collect();
    assert_eq!(passing, vec!["H+", "H-", "c"]);
}

#[test]
fn bracket_homomorphism_is_not_checked() {
    let r = run(Axiom::BracketHomomorphism, &FamilyLevels::constant(1, 5));
    assert_eq!(r.status, Status::NotChecked);
    assert!(r.checks.is_empty());
}

#[test]
fn central_element_satisfies_all_axioms() {
    let levels = FamilyLevels::new(vec![0, 2, 1, 2, 0]);
    for axiom in Axiom::ALL {
        let r = run(axiom, &levels);
        if let Some(c) = r.checks.iter().find(|c| c.subject == "c") {
            assert!(c.passes(TOL), "{}: {:?}", axiom.id(), c.mismatch);
        }
    }
}

#[test]
fn parallel_run_is_deterministic() {
    let levels = FamilyLevels::new(vec![0, 1, 2, 1, 0]);
    let a = verify_all_axioms(&levels, &table(), &HopfDomain::default(), 10, TOL, 3);
    let b = verify_all_axioms(&levels, &table(), &HopfDomain::default(), 10, TOL, 3);
    let summary = |v: &[AxiomReport]| v.iter().map(|r| (r.axiom.id(), r.status, r.max_error().to_bits())).collect::<Vec<_>>();
    assert_eq!(summary(&a), summary(&b));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn homomorphism_for_random_levels(c in proptest::collection::vec(0i64..=2, 5)) {
        let levels = FamilyLevels::new(c);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = verify_family_axiom(Axiom::Homomorphism(Direction::Plus), &levels, &table(), &HopfDomain::default(), 8, TOL, &mut rng);
        prop_assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn counit_then_coproduct_slots(c in proptest::collection::vec(0i64..=2, 5), g in 0usize..4) {
        let levels = FamilyLevels::new(c);
        let w = single(Gen::ALL[g]);
        let d = coproduct(Direction::Plus, &w, 0, &levels).unwrap();
        prop_assert_eq!(d.arity(), 2);
        let e = counit(&d, 1).unwrap();
        prop_assert_eq!(e.slots.clone(), vec![BASE_INDEX]);
        // The counit of the second factor keeps exactly the generator itself.
        let live: Vec<_> = e.terms.iter().filter(|t| !t.syms.is_empty()).collect();
        prop_assert_eq!(live.len(), 1);
        prop_assert_eq!(live[0].syms[0].gen, Gen::ALL[g]);
    }
}
