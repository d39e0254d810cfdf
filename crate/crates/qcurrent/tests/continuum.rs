use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qcurrent::continuum::*;
use qcurrent::dsl::{parse_spec, AlgebraSpec, DEF1_SOURCE, UQ_SOURCE};
use qcurrent::fock::{keyhole_integral, KEYHOLE_RADIUS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXCHANGE_TOL: f64 = 1e-8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn def1() -> AlgebraSpec {
    parse_spec(DEF1_SOURCE).unwrap()
}

fn uq() -> AlgebraSpec {
    parse_spec(UQ_SOURCE).unwrap()
}

fn exchange_pairs(rep: &ContinuumRep, alg: &AlgebraSpec) -> Vec<(String, String)> {
    let names = rep.coordinates.current_names();
    let mut out = Vec::new();
    for x in names {
        for y in names {
            if alg.exchange(x, y).is_some() {
                out.push((x.to_string(), y.to_string()));
            }
        }
    }
    out
}

#[test]
fn gamma_integral_at_unit_point() {
    let want = EULER_GAMMA / 2.0 - 0.5 * (2.0 * PI).ln();
    let got = gamma_integral(c(1.0, 0.0), 1.0, DEFAULT_SHIFTS);
    assert!((got - want).norm() < 1e-13, "{got} vs {want}");
    let quad = gamma_integral_quadrature(c(1.0, 0.0), 1.0, 1e-10).unwrap();
    assert!((quad.value - want).norm() < 1e-6, "{} vs {want}", quad.value);
}

#[test]
fn log_integral_matches_quadrature() {
    assert!((log_integral(c(1.0, 0.0)) + EULER_GAMMA).norm() < 1e-15);
    for x in [c(0.5, 0.0), c(1.3, 0.7), c(2.0, -1.1)] {
        let quad = log_integral_quadrature(x, 1e-10).unwrap();
        assert!((quad.value - log_integral(x)).norm() < 1e-8, "x = {x}");
    }
}

#[test]
fn ln_gamma_quarter_reflection() {
    let prod = (ln_gamma(c(0.25, 0.0)) + ln_gamma(c(0.75, 0.0))).exp();
    assert!((prod.re - PI * 2f64.sqrt()).abs() < 1e-12);
    assert!(prod.im.abs() < 1e-12);
    assert!((ln_gamma(c(5.0, 0.0)).re - 24f64.ln()).abs() < 1e-12);
}

#[test]
fn gamma_identities_on_sampled_points() {
    let r = verify_gamma_identities(24, 1e-10, &mut rng(11)).unwrap();
    assert!(r.quadrature < 1e-6, "{r:?}");
    assert!(r.reflection < 1e-10, "{r:?}");
    assert!(r.stirling < 1e-10, "{r:?}");
}

#[test]
fn recurrence_depth_converges() {
    let z = c(0.3, 0.8);
    let reference = ln_gamma(z);
    let err = |k| (ln_gamma_shifted(z, k) - reference).norm();
    assert!(err(0) > err(10));
    assert!(err(10) < 1e-10);
}

#[test]
fn contraction_decomposition_matches_quadrature() {
    for variant in [KernelVariant::HbarEta, KernelVariant::GammaSqrtQ] {
        let ks = KernelSet::new(variant);
        for (hbar, eta) in [(0.2, 0.7), (0.35, 1.1)] {
            // The composite fields of the first variant carry a 1/hbar each.
            let scale = match variant {
                KernelVariant::HbarEta => hbar * hbar,
                KernelVariant::GammaSqrtQ => 1.0,
            };
            let env = ks.env(hbar, eta);
            let x = c(0.9, 0.4);
            for pair in FieldPair::ALL {
                let kernel = |l: Complex64| {
                    let decay = (-x * l).exp();
                    if decay.norm() < 1e-200 {
                        return Complex64::new(0.0, 0.0);
                    }
                    scale * ks.stated(pair, &env, l).unwrap() * decay
                };
                let want = keyhole_integral(kernel, KEYHOLE_RADIUS, 1e-10).unwrap().value;
                let got = GammaContraction::of_fields(&ks, pair, hbar, eta).eval(x, 40);
                assert!((got - want).norm() < 1e-6, "{} {} {hbar} {eta}: {got} vs {want}", variant.name(), pair.label());
            }
        }
    }
}

#[test]
fn derived_brackets_match_stated_kernels() {
    for variant in [KernelVariant::HbarEta, KernelVariant::GammaSqrtQ] {
        let ks = KernelSet::new(variant);
        let r = verify_derived_brackets(&ks, KernelDomain::default(), 200, &mut rng(5)).unwrap();
        assert!(r.max_error() < 1e-10, "{}: {r:?}", variant.name());
        assert!(r.antisymmetry < 1e-12, "{}: {r:?}", variant.name());
    }
}

#[test]
fn kernel_slopes_at_origin() {
    for variant in [KernelVariant::HbarEta, KernelVariant::GammaSqrtQ] {
        let ks = KernelSet::new(variant);
        for (hbar, eta) in [(0.1, 0.5), (0.3, 1.2)] {
            let (sa, sb) = ks.slopes(hbar, eta).unwrap();
            let (ea, eb) = ks.expected_slopes(hbar, eta);
            assert!((sa - ea).abs() < 1e-8 && (sb - eb).abs() < 1e-8, "{}: {sa} {sb} vs {ea} {eb}", variant.name());
        }
    }
    let (a, b) = KernelSet::new(KernelVariant::GammaSqrtQ).expected_slopes(0.25, 1.0);
    assert_eq!(a, 1.0 / 6.0);
    assert!((b + (3.0 + 0.25) / 6.0).abs() < 1e-15);
}

#[test]
fn level_one_exchanges_hold() {
    let alg = def1();
    let rep = ContinuumRep::level_one(Orientation::Flipped);
    let pairs = exchange_pairs(&rep, &alg);
    assert_eq!(pairs.len(), 9);
    for (x, y) in pairs {
        let r = verify_continuum_exchange(&rep, &alg, &x, &y, ExchangeDomain::default(), 20, EXCHANGE_TOL, &mut rng(1))
            .unwrap();
        assert!(r.passes(EXCHANGE_TOL), "{r:?}");
    }
}

#[test]
fn gamma_sqrt_q_exchanges_hold() {
    let alg = uq();
    let rep = ContinuumRep::gamma_sqrt_q(Orientation::Flipped);
    let pairs = exchange_pairs(&rep, &alg);
    assert_eq!(pairs.len(), 9);
    for (x, y) in pairs {
        let r = verify_continuum_exchange(&rep, &alg, &x, &y, ExchangeDomain::default(), 20, EXCHANGE_TOL, &mut rng(2))
            .unwrap();
        assert!(r.passes(EXCHANGE_TOL), "{r:?}");
    }
}

#[test]
fn written_orientation_gives_reciprocal_factor() {
    let flipped = ContinuumRep::level_one(Orientation::Flipped);
    let written = ContinuumRep::level_one(Orientation::AsWritten);
    let mut r = rng(9);
    for _ in 0..10 {
        let pt = ExchangeDomain::default().draw(&mut r);
        for (x, y) in [("E", "E"), ("F", "F"), ("H+", "E"), ("H+", "H-")] {
            let a = flipped.exchange_ratio(x, y, pt, DEFAULT_SHIFTS).unwrap();
            let b = written.exchange_ratio(x, y, pt, DEFAULT_SHIFTS).unwrap();
            assert!((a * b - 1.0).norm() < 1e-10, "{x}{y}: {}", a * b);
        }
    }
    let alg = def1();
    let r = verify_continuum_exchange(&written, &alg, "E", "E", ExchangeDomain::default(), 10, EXCHANGE_TOL, &mut rng(1))
        .unwrap();
    assert!(!r.passes(EXCHANGE_TOL));
}

#[test]
fn exchange_ratio_oracle() {
    // E E at u - v = 0.4 with hbar = 0.2, eta = 1.
    let rep = ContinuumRep::level_one(Orientation::Flipped);
    let pt = ExchangePoint { hbar: 0.2, eta: 1.0, u: 0.4, v: 0.0 };
    let got = rep.exchange_ratio("E", "E", pt, DEFAULT_SHIFTS).unwrap();
    let want = -(c(PI * 0.4, PI * 0.2)).cosh() / c(PI * 0.4, -PI * 0.2).cosh();
    assert!((got - want).norm() < 1e-12, "{got} vs {want}");
}

#[test]
fn rejects_points_outside_the_strip() {
    let bad = ExchangePoint { hbar: 0.6, eta: 1.0, u: 0.3, v: 0.0 };
    assert!(matches!(check_domain(&bad), Err(ContinuumError::Domain { .. })));
    let rep = ContinuumRep::gamma_sqrt_q(Orientation::Flipped);
    assert!(matches!(rep.vertex("E"), Err(ContinuumError::Unrealized(_))));
}

#[test]
fn multiplicative_ratio_is_eta_invariant() {
    let rep = ContinuumRep::gamma_sqrt_q(Orientation::Flipped);
    for (x, y) in [("X+", "X+"), ("X-", "X-"), ("psi+", "X-"), ("psi+", "psi-")] {
        let w = eta_invariance(&rep, x, y, ExchangeDomain::default(), 20, &mut rng(4)).unwrap();
        assert!(w < 1e-8, "{x}{y}: {w}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swapping_arguments_inverts_the_ratio(
        eta in 0.3f64..1.2, frac in 0.05f64..0.9, u in -1.0f64..1.0, d in 0.05f64..1.0,
    ) {
        let rep = ContinuumRep::level_one(Orientation::Flipped);
        let pt = ExchangePoint { hbar: frac / (2.0 * eta), eta, u, v: u - d };
        let back = ExchangePoint { u: pt.v, v: pt.u, ..pt };
        for (x, y) in [("E", "E"), ("H+", "H+")] {
            let a = rep.exchange_ratio(x, y, pt, DEFAULT_SHIFTS).unwrap();
            let b = rep.exchange_ratio(y, x, back, DEFAULT_SHIFTS).unwrap();
            prop_assert!((a * b - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn contraction_is_symmetric_under_conjugation(
        re in 0.2f64..3.0, im in -1.0f64..1.0, eta in 0.3f64..2.0,
    ) {
        let x = c(re, im);
        let a = gamma_integral(x, eta, 20);
        let b = gamma_integral(x.conj(), eta, 20);
        prop_assert!((a.conj() - b).norm() < 1e-12);
    }
}
