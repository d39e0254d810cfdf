use proptest::prelude::*;
use qcurrent::dsl::{
    check_reciprocity, fuzz::random_spec_source, parse_document, parse_spec, print_document, print_spec,
    verify_param_map, CurrentMap, DslErrorKind, Parity, ParamMap, RelationKind, Spectral, DEF1_SOURCE,
    UQ_SOURCE,
};
use qcurrent::exact::Sampler;
use qcurrent::symexpr::SymExpr;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn def1_loads_with_expected_shape() {
    let spec = parse_spec(DEF1_SOURCE).unwrap();
    assert_eq!(spec.spectral, Spectral::Additive);
    assert_eq!(spec.currents.len(), 4);
    assert_eq!(spec.generator_count(), 5);
    assert_eq!(spec.family_count(), 7);
    assert_eq!(spec.relations.len(), 10);
    assert_eq!(spec.parity("E"), Some(Parity::Odd));
    assert_eq!(spec.parity("H-"), Some(Parity::Even));
    assert!(spec.exchange("E", "E").unwrap().negative);
    assert!(!spec.exchange("H-", "F").unwrap().negative);
    let b = spec.bracket("E", "F").unwrap();
    assert_eq!(b.terms.len(), 2);
    assert_eq!(b.terms[1].current.name, "H-");
}

#[test]
fn uq_loads_with_five_generators_and_seven_families() {
    let doc = parse_document(UQ_SOURCE).unwrap();
    let spec = &doc.algebra;
    assert_eq!(spec.spectral, Spectral::Multiplicative);
    assert_eq!(spec.generator_count(), 5);
    assert_eq!(spec.centrals, vec!["gamma".to_string()]);
    assert_eq!(spec.family_count(), 7);
    assert!(spec.exchange("X-", "X-").unwrap().negative);
    assert_eq!(spec.exchange("psi+", "psi+").unwrap().factor, SymExpr::num(1));
    assert_eq!(doc.realizations.len(), 2);
    assert_eq!(doc.realizations[0].vertices.len(), 4);
    assert_eq!(doc.realizations[1].name, "gamma_q_amended");
}

#[test]
fn builtins_round_trip() {
    for src in [DEF1_SOURCE, UQ_SOURCE] {
        let doc = parse_document(src).unwrap();
        let printed = print_document(&doc);
        let again = parse_document(&printed).unwrap();
        assert_eq!(doc, again, "\n{printed}");
        assert_eq!(printed, print_document(&again));
    }
}

#[test]
fn empty_algebra_has_no_relations() {
    let spec = parse_spec("algebra empty { }").unwrap();
    assert!(spec.relations.is_empty());
    assert_eq!(print_spec(&spec), "algebra empty {\n  spectral additive;\n}\n");
}

#[test]
fn unknown_symbol_reports_position() {
    let src = "algebra t {\n  param a;\n  current E(u) even;\n  E(u) E(v) = exp(a*nope) E(v) E(u);\n}";
    let err = parse_spec(src).unwrap_err();
    assert_eq!(err.kind, DslErrorKind::UnknownSymbol("nope".into()));
    assert_eq!((err.line, err.col), (4, 21));
    assert!(err.to_string().starts_with("4:21:"));
}

#[test]
fn syntax_error_reports_expected_token() {
    let err = parse_spec("algebra t {\n  current E(u) odd\n}").unwrap_err();
    assert_eq!(err.line, 3);
    assert!(matches!(err.kind, DslErrorKind::Unexpected { .. }), "{err}");
}

#[test]
fn odd_pair_without_minus_is_a_parity_error() {
    let src = "algebra t { param a; current E(u) odd; E(u) E(v) = exp(a*(u - v)) E(v) E(u); }";
    assert!(matches!(parse_spec(src).unwrap_err().kind, DslErrorKind::Parity(_)));
    let src = "algebra t { param a; current H(u) even; H(u) H(v) = -exp(a*(u - v)) H(v) H(u); }";
    assert!(matches!(parse_spec(src).unwrap_err().kind, DslErrorKind::Parity(_)));
}

#[test]
fn reciprocity_violation_is_rejected() {
    let src = "algebra t { param a; current H(u) even; H(u) H(v) = cosh(a*(u - v)) H(v) H(u); }";
    let err = parse_spec(src).unwrap_err();
    assert!(matches!(err.kind, DslErrorKind::Reciprocity(_)), "{err}");
    assert_eq!(err.line, 1);
}

#[test]
fn reciprocity_across_both_orders() {
    let ok = "algebra t { param a; current A(u) even; current B(u) even;
        A(u) B(v) = exp(a*(u - v)) B(v) A(u);
        B(u) A(v) = exp(a*(u - v)) A(v) B(u); }";
    check_reciprocity(&parse_spec(ok).unwrap()).unwrap();
    let bad = ok.replace("B(u) A(v) = exp(a*(u - v))", "B(u) A(v) = exp(a*(v - u))");
    assert!(matches!(parse_spec(&bad).unwrap_err().kind, DslErrorKind::Reciprocity(_)));
}

#[test]
fn plus_minus_template_expands_to_one_family() {
    let src = "algebra t { param a; current H+(u) even; current H-(u) even;
        H±(u) H±(v) = exp(±a*(u - v))*exp(∓a*(u - v)) H±(v) H±(u); }";
    let spec = parse_spec(src).unwrap();
    assert_eq!(spec.relations.len(), 2);
    assert_eq!(spec.family_count(), 1);
    let RelationKind::Exchange(e) = &spec.relations[1].kind else { panic!() };
    assert_eq!(e.left.name, "H-");
    assert_eq!(e.factor.to_string(), "exp(-a*(u - v))*exp(a*(u - v))");
}

#[test]
fn twenty_fuzzed_specs_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for k in 0..20 {
        let src = random_spec_source(&mut rng);
        let spec = parse_spec(&src).unwrap_or_else(|e| panic!("spec {k}: {e}\n{src}"));
        let printed = print_spec(&spec);
        let again = parse_spec(&printed).unwrap_or_else(|e| panic!("reprint {k}: {e}\n{printed}"));
        assert_eq!(spec, again, "spec {k}\n{src}\n{printed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn fuzzed_specs_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = random_spec_source(&mut rng);
        let spec = parse_spec(&src).unwrap();
        let printed = print_spec(&spec);
        prop_assert_eq!(&printed, &print_spec(&parse_spec(&printed).unwrap()));
    }
}

fn builtins() -> (qcurrent::dsl::AlgebraSpec, qcurrent::dsl::AlgebraSpec) {
    (parse_spec(DEF1_SOURCE).unwrap(), parse_spec(UQ_SOURCE).unwrap())
}

#[test]
fn raising_map_carries_the_e_relation() {
    let (def1, uq) = builtins();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let report = verify_param_map(&def1, &uq, &ParamMap::raising(), 50, &mut rng).unwrap();
    assert_eq!(report.relations.len(), 1);
    assert_eq!(report.relations[0].dst, "X+X+");
    assert!(report.passes(1e-10), "{report:?}");
}

#[test]
fn lowering_map_uses_primed_parameters() {
    let (def1, uq) = builtins();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let report = verify_param_map(&def1, &uq, &ParamMap::lowering(), 50, &mut rng).unwrap();
    assert_eq!(report.relations[0].src, "FF");
    assert!(report.passes(1e-10), "{report:?}");
    // The unprimed parameters do not work once c is nonzero.
    let mut wrong = ParamMap::lowering();
    wrong.spectral = ParamMap::raising().spectral;
    wrong.params = ParamMap::raising().params;
    let report = verify_param_map(&def1, &uq, &wrong, 50, &mut rng).unwrap();
    assert!(report.max_error() > 1e-3);
}

#[test]
fn degeneration_map_matches_all_relations_and_deltas() {
    let (def1, uq) = builtins();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let report = verify_param_map(&def1, &uq, &ParamMap::degeneration(), 50, &mut rng).unwrap();
    assert_eq!(report.relations.len(), 9);
    assert_eq!(report.transports.len(), 2);
    for t in &report.transports {
        assert!((t.constant.re - 2.0).abs() < 1e-12 && t.constant.im.abs() < 1e-12, "{t:?}");
    }
    assert!(report.passes(1e-10), "{report:?}");
}

#[test]
fn identity_map_on_uq_is_exact() {
    let (_, uq) = builtins();
    let ids = ["X+", "X-", "psi+", "psi-"];
    let map = ParamMap {
        name: "identity".into(),
        fixed: vec![],
        spectral: SymExpr::var("u"),
        params: vec![],
        currents: ids
            .iter()
            .map(|n| CurrentMap { src: n.to_string(), dst: n.to_string(), prefactor: SymExpr::num(1) })
            .collect(),
        domain: vec![
            ("q".into(), Sampler::default_complex()),
            ("gamma".into(), Sampler::default_complex()),
        ],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let report = verify_param_map(&uq, &uq, &map, 20, &mut rng).unwrap();
    assert_eq!(report.relations.len(), 9);
    assert_eq!(report.transports.len(), 2);
    assert!(report.max_error() < 1e-14, "{report:?}");
}
