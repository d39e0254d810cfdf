use std::collections::BTreeMap;

use proptest::prelude::*;
use qcurrent::dsl::{parse_document, parse_expr, Document, UQ_SOURCE};
use num_complex::Complex64;
use qcurrent::exact::{LinearFactors, RatFunc};
use qcurrent::fock::{ZeroCoef, ZeroExponent};
use qcurrent::vertex::*;

const LIMIT_TOL: f64 = 1e-6;

fn doc() -> Document {
    parse_document(UQ_SOURCE).unwrap()
}

fn realization(name: &str) -> Realization {
    let d = doc();
    let spec = d.realizations.iter().find(|r| r.name == name).unwrap();
    Realization::from_spec(spec).unwrap()
}

fn rf(src: &str) -> RatFunc {
    parse_expr(src, &["s"], &["z", "w", "u"]).unwrap().to_ratfunc(&BTreeMap::new()).unwrap()
}

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

#[test]
fn same_current_contraction_closed_form() {
    let real = realization("gamma_q");
    let a = real.vertex("X+").unwrap().renamed("z").unwrap();
    let b = real.vertex("X+").unwrap().renamed("w").unwrap();
    let c = real.contract(&a, &b).unwrap();
    assert_eq!(c.to_ratfunc().unwrap(), rf("z^2*(1 - w/z)*(1 + w/(z*s^2))"));
}

#[test]
fn amended_exchanges_all_hold() {
    let d = doc();
    let real = realization("gamma_q_amended");
    assert_eq!(real.target, "uq_osp22");
    for (x, y) in PAIRS {
        let c = verify_exchange(&real, &d.algebra, x, y).unwrap();
        assert!(c.passes(), "{x}{y}: ratio {} vs {}", c.ratio, c.target);
    }
}

#[test]
fn verbatim_zero_mode_shift_breaks_psi_relations() {
    let d = doc();
    let real = realization("gamma_q");
    let quotient = |x, y| verify_exchange(&real, &d.algebra, x, y).unwrap().quotient;
    assert!(quotient("X+", "X+").is_one());
    assert!(quotient("X-", "X-").is_one());
    assert_eq!(quotient("psi+", "X+"), rf("-s^2/z^2"));
    assert_eq!(quotient("psi+", "X-"), rf("-w^2"));
    assert_eq!(quotient("psi+", "psi+"), rf("w^2/z^2"));
    assert_eq!(quotient("psi+", "psi-"), rf("s^4*w^2/z^2"));
}

#[test]
fn amended_delta_bracket() {
    let d = doc();
    let real = realization("gamma_q_amended");
    let c = verify_delta_bracket(&real, &d.algebra, "X+", "X-").unwrap();
    assert!(c.ordering_ok());
    assert_eq!(c.poles.len(), 2);
    let locations: Vec<RatFunc> = c.poles.iter().map(|p| p.location.clone()).collect();
    assert!(locations.contains(&rf("s^(-2)")) && locations.contains(&rf("s^2")));
    assert!(c.poles.iter().all(|p| p.order == 1 && p.term.is_some()));
    assert!(c.constants_equal);
    assert_eq!(c.constant(), Some(&RatFunc::one()));
    let limit = c.limit.as_ref().unwrap();
    assert!(limit.finite && limit.drift <= LIMIT_TOL);
    assert!(c.passes(LIMIT_TOL));
}

#[test]
fn fused_operator_at_pole_is_psi() {
    let real = realization("gamma_q_amended");
    let d = doc();
    let c = verify_delta_bracket(&real, &d.algebra, "X+", "X-").unwrap();
    let pole = c.poles.iter().find(|p| p.location == rf("s^(-2)")).unwrap();
    let psi = real.vertex("psi+").unwrap().at(&rf("z/s"), "z").unwrap();
    assert!(pole.fused.same_operator(&psi));
}

#[test]
fn verbatim_delta_bracket_has_wrong_ordering() {
    let d = doc();
    let real = realization("gamma_q");
    let c = verify_delta_bracket(&real, &d.algebra, "X+", "X-").unwrap();
    assert_eq!(c.ordering, rf("w^2"));
    assert!(!c.passes(LIMIT_TOL));
}

#[test]
fn relocating_a_vertex() {
    let real = realization("gamma_q_amended");
    let x = real.vertex("X+").unwrap();
    let moved = x.at(&rf("s^2*u"), "u").unwrap();
    assert_eq!(moved.osc[0].multiplier, rf("s^2"));
    assert_eq!(moved.zero.p["Pa"], ZeroCoef::log("u").add(&ZeroCoef::log("s").scale(&RatFunc::from_int(2))));
    assert_eq!(moved.renamed("z").unwrap().at(&rf("z"), "z").unwrap().var, "z");
    assert!(x.at(&rf("z + 1"), "z").is_err());
    assert!(log_of(&rf("-z")).unwrap() == ZeroCoef::log("z").add(&ZeroCoef::i_pi()));
    assert!(log_of(&rf("2*z")).is_err());
}

fn op(var: &str, coefs: &[(usize, i64, i64)], p: i64, q: i64) -> VertexOp {
    let mut v = VertexOp::identity(var);
    for (fam, c, shift) in coefs {
        v.osc.push(OscTerm {
            family: ["a", "b"][*fam].to_string(),
            coef: RatFunc::from_int(*c),
            multiplier: RatFunc::var_pow("s", *shift),
        });
    }
    let mut zero = ZeroExponent::default();
    if p != 0 {
        zero.p.insert("Pa".into(), ZeroCoef::log(var).scale(&RatFunc::from_int(p)));
    }
    if q != 0 {
        zero.q.insert("Qa".into(), RatFunc::from_int(q));
    }
    v.zero = zero;
    v
}

fn term() -> impl Strategy<Value = (usize, i64, i64)> {
    (0usize..2, -2i64..=2, -2i64..=2).prop_filter("nonzero", |t| t.1 != 0)
}

fn closed(c: &ContractionResult) -> LinearFactors {
    match &c.factor {
        Factor::Closed(f) => f.clone(),
        Factor::Series(_) => panic!("integer weights give a closed form"),
    }
}

/// `scalar * factor(w/z)` evaluated numerically.
fn eval_contraction(c: &ContractionResult, point: &BTreeMap<&str, Complex64>) -> Complex64 {
    let look = |n: &str| point.get(n).copied();
    let x = point[c.inner.as_str()] / point[c.outer.as_str()];
    let mut acc = c.scalar.eval(&look).unwrap();
    for (r, e) in closed(c).factors() {
        acc *= (Complex64::new(1.0, 0.0) - r.eval(&look).unwrap() * x).powi(*e as i32);
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Contraction is multiplicative in the inner operator.
    #[test]
    fn contraction_is_multiplicative(
        ta in prop::collection::vec(term(), 1..3),
        tb in prop::collection::vec(term(), 1..3),
        tc in prop::collection::vec(term(), 1..3),
        (pa, qb, qc) in (-2i64..=2, -2i64..=2, -2i64..=2),
    ) {
        let real = realization("gamma_q_amended");
        let a = op("z", &ta, pa, 0);
        let b = op("w", &tb, 0, qb);
        let c = op("w", &tc, 0, qc);
        let whole = real.contract(&a, &b.fuse(&c)).unwrap();
        let left = real.contract(&a, &b).unwrap();
        let right = real.contract(&a, &c).unwrap();
        prop_assert_eq!(closed(&whole), closed(&left).mul(&closed(&right)));
        prop_assert_eq!(whole.scalar, left.scalar.mul(&right.scalar));
    }

    /// `f(z, w) f(w, z) = 1` for the exchange factor of an operator with itself.
    #[test]
    fn self_exchange_is_reciprocal(
        ta in prop::collection::vec(term(), 1..3),
        (p, q) in (-2i64..=2, -2i64..=2),
        (zr, zi, wr, wi) in (0.3f64..1.5, -1.0f64..1.0, 0.3f64..1.5, -1.0f64..1.0),
    ) {
        let real = realization("gamma_q_amended");
        let a = op("z", &ta, p, q);
        let b = a.renamed("w").unwrap();
        let ab = real.contract(&a, &b).unwrap();
        let ba = real.contract(&b, &a).unwrap();
        let (z, w) = (Complex64::new(zr, zi), Complex64::new(wr, wi));
        let s = Complex64::new(1.1, 0.2);
        let at = |z, w| BTreeMap::from([("z", z), ("w", w), ("s", s)]);
        let f = |z, w| eval_contraction(&ab, &at(z, w)) / eval_contraction(&ba, &at(z, w));
        let product = f(z, w) * f(w, z);
        prop_assert!((product - 1.0).norm() < 1e-9, "{}", product);
    }
}
