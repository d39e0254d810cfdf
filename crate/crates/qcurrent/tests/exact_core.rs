use num_complex::Complex64;
use proptest::prelude::*;
use qcurrent::exact::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn x() -> RatFunc {
    RatFunc::var("x")
}

fn poly_from(coeffs: &[(i64, u32, u32)]) -> Poly {
    // terms c * x^i * y^j
    let mut p = Poly::zero();
    for &(c, i, j) in coeffs {
        let m = Mono::var("x", i).mul(&Mono::var("y", j));
        p = &p + &Poly::monomial(rat(c, 1), m);
    }
    p
}

fn at(xv: f64, yv: f64) -> impl Fn(&str) -> Option<Complex64> {
    move |v| match v {
        "x" => Some(Complex64::new(xv, 0.3)),
        "y" => Some(Complex64::new(yv, -0.2)),
        "s" => Some(Complex64::new(0.7, 0.4)),
        _ => None,
    }
}

#[test]
fn reduced_form_cancels_common_factor() {
    let num = &(&x() * &x()) - &RatFunc::one();
    let den = &x() - &RatFunc::one();
    let q = num.div(&den).unwrap();
    assert_eq!(q, &x() + &RatFunc::one());
}

#[test]
fn canonical_form_makes_equal_values_structurally_equal() {
    let y = RatFunc::var("y");
    let a = (&x() + &y).div(&(&(&x() * &y) + &(&x() * &x()))).unwrap();
    let b = RatFunc::one().div(&x()).unwrap();
    assert_eq!(a, b);
    let c = RatFunc::from_int(-2).div(&(&(&x() * &RatFunc::from_int(-4)) + &RatFunc::from_int(6))).unwrap();
    let d = RatFunc::one().div(&(&(&x() * &RatFunc::from_int(2)) - &RatFunc::from_int(3))).unwrap();
    assert_eq!(c, d);
}

#[test]
fn division_by_zero_is_an_error() {
    assert_eq!(RatFunc::one().div(&RatFunc::zero()), Err(ExactError::DivisionByZero));
}

#[test]
fn geometric_series_expansion() {
    let f = RatFunc::one().div(&(&RatFunc::one() - &x())).unwrap();
    let s = TruncSeries::expand(&f, "x", 10).unwrap();
    for k in 0..=10 {
        assert!(s.coeff(k).is_one());
    }
}

#[test]
fn order_cap_is_enforced() {
    let err = TruncSeries::zero("x", MAX_SERIES_ORDER + 1).unwrap_err();
    assert!(matches!(err, ExactError::OrderOverflow { .. }));
}

/// The (aa) bracket of the discrete realization at γ = q, written in s = q^{1/2}.
fn aa_bracket() -> GeomBracket {
    let s = RatFunc::var("s");
    let minus_inv_q = -&s.powi(-2).unwrap();
    GeomBracket::new(vec![(rat(-1, 1), RatFunc::one()), (rat(-1, 1), minus_inv_q)])
}

#[test]
fn aa_contraction_closed_form_is_frozen() {
    // Frozen value: Π(1 - r x)^{-α} = (1 - x)(1 + x/q) with q = s².
    let closed = aa_bracket().closed_form().unwrap().to_ratfunc("x").unwrap();
    let s = RatFunc::var("s");
    let expect = &(&RatFunc::one() - &x()) * &(&RatFunc::one() + &x().div(&(&s * &s)).unwrap());
    assert_eq!(closed, expect);
}

#[test]
fn closed_form_agrees_with_series_to_order_24() {
    let b = aa_bracket();
    let closed = b.closed_form().unwrap().to_ratfunc("x").unwrap();
    let via_closed = TruncSeries::expand(&closed, "x", 24).unwrap();
    let via_exp = b.contraction_series("x", 24).unwrap();
    assert_eq!(via_closed, via_exp);
}

#[test]
fn fractional_weights_fall_back_to_series() {
    let r = RatFunc::constant(rat(2, 3));
    let b = GeomBracket::new(vec![(rat(1, 2), r)]);
    assert!(b.closed_form().is_none());
    let s = b.contraction_series("x", 8).unwrap();
    // Oracle: binomial series (1 - r x)^{-1/2} = Σ C(2n, n)/4^n r^n x^n.
    let mut binom = rat(1, 1);
    for n in 0..=8i64 {
        if n > 0 {
            binom *= rat(2 * n - 1, 2 * n);
        }
        let expect = &RatFunc::constant(binom.clone()) * &RatFunc::constant(rat(2, 3)).powi(n).unwrap();
        assert_eq!(s.coeff(n as usize), &expect, "coefficient {n}");
    }
}

#[test]
fn poles_and_coefficients() {
    // (1 - x/2)^{-1} (1 - 3x)^{-1} (1 - x)
    let f = LinearFactors::new(vec![
        (RatFunc::constant(rat(1, 2)), -1),
        (RatFunc::constant(rat(3, 1)), -1),
        (RatFunc::one(), 1),
    ]);
    let poles = f.poles().unwrap();
    assert_eq!(poles.len(), 2);
    let p2 = poles.iter().find(|p| p.location == RatFunc::from_int(2)).unwrap();
    // coefficient at x = 2: (1 - 6)^{-1} (1 - 2) = 1/5
    assert_eq!(p2.coefficient, RatFunc::constant(rat(1, 5)));
}

#[test]
fn identity_test_accepts_true_identity() {
    let domain = SampleDomain::new().with("z", Sampler::default_complex());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let out = rand_ident_test(
        |p| {
            let z = p["z"];
            Ok(z.sin() * z.sin() + z.cos() * z.cos())
        },
        |_| Ok(Complex64::new(1.0, 0.0)),
        &domain,
        50,
        &mut rng,
    )
    .unwrap();
    assert!(out.passes(1e-12), "{}", out.max_error);
    assert_eq!(out.samples, 50);
}

#[test]
fn identity_test_rejects_false_identity_and_names_worst_point() {
    let domain = SampleDomain::new().with("z", Sampler::default_complex());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let out = rand_ident_test(
        |p| Ok(p["z"].cosh()),
        |p| Ok(p["z"].sinh()),
        &domain,
        20,
        &mut rng,
    )
    .unwrap();
    assert!(!out.passes(1e-6));
    assert!(out.worst.is_some());
}

#[test]
fn near_pole_points_are_redrawn() {
    let domain = SampleDomain::new().with("z", Sampler::Real { lo: 0.0, hi: 1.0 });
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let out = rand_ident_test(
        |p| {
            let d = p["z"].re - 0.5;
            if d.abs() < 0.2 {
                Err(EvalFailure::NearPole(d.abs()))
            } else {
                Ok(Complex64::new(1.0 / d, 0.0))
            }
        },
        |p| Ok(Complex64::new(1.0 / (p["z"].re - 0.5), 0.0)),
        &domain,
        30,
        &mut rng,
    )
    .unwrap();
    assert!(out.redraws > 0);
    assert!(out.passes(1e-14));
}

#[test]
fn persistent_poles_are_reported_not_passed() {
    let domain = SampleDomain::new().with("z", Sampler::default_complex());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let err = rand_ident_test(
        |_| Err(EvalFailure::NearPole(0.0)),
        |_| Ok(Complex64::new(0.0, 0.0)),
        &domain,
        3,
        &mut rng,
    )
    .unwrap_err();
    assert!(matches!(err, IdentityError::PersistentPole(_)));
}

fn small_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-3i64..=3, 0u32..3, 0u32..3), 1..4).prop_map(|t| poly_from(&t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gcd_divides_both_and_contains_common_factor(a in small_poly(), b in small_poly(), g in small_poly()) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !g.is_zero());
        let ag = &a * &g;
        let bg = &b * &g;
        let d = ag.gcd(&bg);
        prop_assert!(ag.div_exact(&d).is_some());
        prop_assert!(bg.div_exact(&d).is_some());
        prop_assert!(d.div_exact(&g.monic()).is_some());
    }

    #[test]
    fn ratfunc_field_axioms_hold_numerically(a in small_poly(), b in small_poly(), c in small_poly(), d in small_poly()) {
        prop_assume!(!b.is_zero() && !d.is_zero());
        let f1 = RatFunc::new(a.clone(), b.clone()).unwrap();
        let f2 = RatFunc::new(c.clone(), d.clone()).unwrap();
        let sum = &f1 + &f2;
        let prod = &f1 * &f2;
        let pt = at(0.37, -1.21);
        let (ea, eb, ec, ed) = (a.eval(&pt).unwrap(), b.eval(&pt).unwrap(), c.eval(&pt).unwrap(), d.eval(&pt).unwrap());
        prop_assume!(eb.norm() > 1e-6 && ed.norm() > 1e-6);
        let s_expect = ea / eb + ec / ed;
        let p_expect = ea / eb * (ec / ed);
        prop_assert!(rel_error(sum.eval(&pt).unwrap(), s_expect) < 1e-9);
        prop_assert!(rel_error(prod.eval(&pt).unwrap(), p_expect) < 1e-9);
        // canonical form: (f1 + f2) - f2 is structurally f1
        prop_assert_eq!(&(&sum - &f2), &f1);
    }

    #[test]
    fn integer_weight_closed_form_matches_series(
        weights in prop::collection::vec((-3i64..=3, -4i64..=4, 1i64..=3, -2i64..=2), 1..4)
    ) {
        let terms: Vec<(Rat, RatFunc)> = weights
            .iter()
            .filter(|(_, n, _, _)| *n != 0)
            .map(|&(a, n, d, k)| {
                let r = &RatFunc::constant(rat(n, d)) * &RatFunc::var_pow("s", k);
                (rat(a, 1), r)
            })
            .collect();
        let b = GeomBracket::new(terms);
        let closed = b.closed_form().unwrap().to_ratfunc("x").unwrap();
        let lhs = TruncSeries::expand(&closed, "x", 12).unwrap();
        let rhs = b.contraction_series("x", 12).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
