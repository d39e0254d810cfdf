//! One line per acceptance criterion. Set `ACCEPTANCE_STRICT=1` to turn any
//! failing criterion into a nonzero exit status.

use std::time::Instant;

use qcurrent::continuum::{
    eta_invariance, verify_continuum_exchange, verify_derived_brackets, verify_gamma_identities, ContinuumRep,
    ExchangeDomain, KernelDomain, KernelSet, KernelVariant, Orientation,
};
use qcurrent::dsl::{
    check_parity, check_reciprocity, fuzz::random_spec_source, parse_document, parse_spec, print_document,
    print_spec, verify_param_map, AlgebraSpec, ParamMap, DEF1_SOURCE, UQ_SOURCE,
};
use qcurrent::exact::RatFunc;
use qcurrent::hopf::{verify_family_axiom, Axiom, Direction, ExchangeTable, FamilyLevels, HopfDomain, Status};
use qcurrent::vertex::{verify_delta_bracket, verify_exchange, Realization};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DISCRETE_BUDGET_S: f64 = 5.0;
const LIMIT_TOL: f64 = 1e-6;
const KERNEL_TOL: f64 = 1e-10;
const ANTISYMMETRY_TOL: f64 = 1e-12;
const SLOPE_TOL: f64 = 1e-6;
const KERNEL_BUDGET_S: f64 = 10.0;
const QUADRATURE_TOL: f64 = 1e-6;
const REFLECTION_TOL: f64 = 1e-10;
const GAMMA_SAMPLES: usize = 20;
const GAMMA_BUDGET_S: f64 = 30.0;
const EXCHANGE_TOL: f64 = 1e-6;
const EXCHANGE_SAMPLES: usize = 50;
const ETA_TOL: f64 = 1e-8;
const PARAM_TOL: f64 = 1e-10;
const PARAM_SAMPLES: usize = 100;
const HOPF_TOL: f64 = 1e-8;
const HOPF_SAMPLES: usize = 50;
const FUZZ_SPECS: usize = 20;

const UQ_PAIRS: [(&str, &str); 9] = [
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

const DEF1_PAIRS: [(&str, &str); 9] = [
    ("E", "E"),
    ("F", "F"),
    ("H+", "E"),
    ("H-", "E"),
    ("H+", "F"),
    ("H-", "F"),
    ("H+", "H+"),
    ("H-", "H-"),
    ("H+", "H-"),
];

struct Line {
    pass: bool,
    detail: String,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn realization(name: &str) -> (AlgebraSpec, Realization) {
    let doc = parse_document(UQ_SOURCE).unwrap();
    let spec = doc.realizations.iter().find(|r| r.name == name).unwrap();
    let real = Realization::from_spec(spec).unwrap();
    (doc.algebra, real)
}

fn discrete_exchanges() -> Line {
    let start = Instant::now();
    let (alg, real) = realization("gamma_q_amended");
    let held = UQ_PAIRS.iter().filter(|(x, y)| verify_exchange(&real, &alg, x, y).unwrap().passes()).count();
    let secs = start.elapsed().as_secs_f64();
    let (alg, printed) = realization("gamma_q");
    let printed_held =
        UQ_PAIRS.iter().filter(|(x, y)| verify_exchange(&printed, &alg, x, y).unwrap().passes()).count();
    Line {
        pass: held == UQ_PAIRS.len() && secs < DISCRETE_BUDGET_S,
        detail: format!(
            "{held}/9 exchange relations exact on gamma_q_amended in {secs:.2} s (budget {DISCRETE_BUDGET_S} s); \
             with the extra Qb zero-mode shift in X+ only {printed_held}/9 hold"
        ),
    }
}

fn discrete_anticommutator() -> Line {
    let (alg, real) = realization("gamma_q_amended");
    let c = verify_delta_bracket(&real, &alg, "X+", "X-").unwrap();
    let s = RatFunc::var("s");
    let q = &s * &s;
    let mut locations: Vec<RatFunc> = c.poles.iter().map(|p| p.location.clone()).collect();
    locations.sort_by_key(|l| l.to_string());
    let mut want = vec![q.inv().unwrap(), q.clone()];
    want.sort_by_key(|l| l.to_string());
    let simple = c.poles.iter().all(|p| p.order == 1);
    let fused = c.poles.iter().all(|p| p.term.is_some());
    let drift = c.limit.as_ref().map_or(f64::INFINITY, |l| if l.finite { l.drift } else { f64::INFINITY });
    let constant = c.constant().map_or("none".to_string(), |k| k.to_string());
    Line {
        pass: c.ordering_ok()
            && locations == want
            && simple
            && fused
            && c.unmatched_terms.is_empty()
            && c.constants_equal
            && drift <= LIMIT_TOL,
        detail: format!(
            "{} simple poles at w/z = q^(-1), q; fused operators match psi±: {fused}; equal constants {} = {constant}; \
             q -> 1 drift {drift:.1e} (tol {LIMIT_TOL:e})",
            c.poles.len(),
            c.constants_equal
        ),
    }
}

fn kernels() -> Line {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut antisym = 0.0f64;
    let mut slope = 0.0f64;
    for (k, variant) in [KernelVariant::HbarEta, KernelVariant::GammaSqrtQ].into_iter().enumerate() {
        let ks = KernelSet::new(variant);
        let r = verify_derived_brackets(&ks, KernelDomain::default(), 200, &mut rng(100 + k as u64)).unwrap();
        worst = worst.max(r.max_error());
        antisym = antisym.max(r.antisymmetry);
        for (hbar, eta) in [(0.05, 0.4), (0.2, 0.7), (0.3, 1.2), (0.45, 1.5)] {
            let (sa, sb) = ks.slopes(hbar, eta).unwrap();
            let (ea, eb) = ks.expected_slopes(hbar, eta);
            slope = slope.max((sa - ea).abs()).max((sb - eb).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Line {
        pass: worst <= KERNEL_TOL && antisym <= ANTISYMMETRY_TOL && slope <= SLOPE_TOL && secs < KERNEL_BUDGET_S,
        detail: format!(
            "composite brackets {worst:.1e} (tol {KERNEL_TOL:e}, 200 samples per family); antisymmetry {antisym:.1e} \
             (tol {ANTISYMMETRY_TOL:e}); small-λ slopes {slope:.1e} (tol {SLOPE_TOL:e}); {secs:.2} s"
        ),
    }
}

fn gamma_identities() -> Line {
    let start = Instant::now();
    let r = verify_gamma_identities(GAMMA_SAMPLES, 1e-10, &mut rng(200)).unwrap();
    let secs = start.elapsed().as_secs_f64();
    Line {
        pass: r.quadrature <= QUADRATURE_TOL && r.reflection <= REFLECTION_TOL && secs < GAMMA_BUDGET_S,
        detail: format!(
            "keyhole quadrature vs ln Γ form {:.1e} (tol {QUADRATURE_TOL:e}) at {} points; reflection {:.1e} \
             (tol {REFLECTION_TOL:e}); {secs:.2} s",
            r.quadrature, r.samples, r.reflection
        ),
    }
}

fn continuum_exchange() -> Line {
    let def1 = parse_spec(DEF1_SOURCE).unwrap();
    let uq = parse_spec(UQ_SOURCE).unwrap();
    let c1 = ContinuumRep::level_one(Orientation::Flipped);
    let sqrt_q = ContinuumRep::gamma_sqrt_q(Orientation::Flipped);
    let d = ExchangeDomain::default();
    let mut worst = 0.0f64;
    let mut drift = 0.0f64;
    let mut ok = true;
    for (rep, alg, pairs, seed) in [(&c1, &def1, DEF1_PAIRS, 300), (&sqrt_q, &uq, UQ_PAIRS, 400)] {
        for (k, (x, y)) in pairs.iter().enumerate() {
            let r = verify_continuum_exchange(rep, alg, x, y, d, EXCHANGE_SAMPLES, EXCHANGE_TOL, &mut rng(seed + k as u64))
                .unwrap();
            ok &= r.passes(EXCHANGE_TOL);
            worst = worst.max(r.max_error);
            drift = drift.max(r.drift);
        }
    }
    let mut eta = 0.0f64;
    for (k, (x, y)) in UQ_PAIRS.iter().enumerate() {
        eta = eta.max(eta_invariance(&sqrt_q, x, y, d, EXCHANGE_SAMPLES, &mut rng(500 + k as u64)).unwrap());
    }
    Line {
        pass: ok && eta <= ETA_TOL,
        detail: format!(
            "c = 1 and γ = q^(1/2) exchange ratios {worst:.1e} (tol {EXCHANGE_TOL:e}, {EXCHANGE_SAMPLES} samples each); \
             K -> K+10 drift {drift:.1e} (limit {:.0e}); η-invariance {eta:.1e} (tol {ETA_TOL:e})",
            EXCHANGE_TOL / 10.0
        ),
    }
}

fn param_maps() -> Line {
    let def1 = parse_spec(DEF1_SOURCE).unwrap();
    let uq = parse_spec(UQ_SOURCE).unwrap();
    let mut parts = Vec::new();
    let mut ok = true;
    for (k, (name, map)) in
        [("η branch", ParamMap::raising()), ("η' branch", ParamMap::lowering()), ("c = 0", ParamMap::degeneration())]
            .into_iter()
            .enumerate()
    {
        let r = verify_param_map(&def1, &uq, &map, PARAM_SAMPLES, &mut rng(600 + k as u64)).unwrap();
        ok &= r.passes(PARAM_TOL);
        parts.push(format!("{name} {:.1e} over {} relations", r.max_error(), r.relations.len()));
    }
    Line { pass: ok, detail: format!("{} (tol {PARAM_TOL:e}, {PARAM_SAMPLES} samples)", parts.join("; ")) }
}

fn hopf_family() -> Line {
    let table = ExchangeTable::from_spec(&parse_spec(DEF1_SOURCE).unwrap()).unwrap();
    let required = [
        Axiom::Counit(Direction::Plus),
        Axiom::Counit(Direction::Minus),
        Axiom::Antipode(Direction::Plus),
        Axiom::Antipode(Direction::Minus),
        Axiom::ShiftInverse,
        Axiom::Cocommute,
        Axiom::TwistedCoassoc(Direction::Plus),
        Axiom::TwistedCoassoc(Direction::Minus),
        Axiom::Homomorphism(Direction::Plus),
        Axiom::Homomorphism(Direction::Minus),
    ];
    let sequences: [[i64; 5]; 5] = [[0; 5], [1; 5], [2; 5], [0, 1, 2, 0, 1], [2, 1, 0, 2, 1]];
    let mut failing: Vec<String> = Vec::new();
    let mut holding: Vec<String> = Vec::new();
    for (k, axiom) in required.into_iter().enumerate() {
        let bad: Vec<String> = sequences
            .iter()
            .filter(|c| {
                let levels = FamilyLevels::new(c.to_vec());
                let r = verify_family_axiom(
                    axiom,
                    &levels,
                    &table,
                    &HopfDomain::default(),
                    HOPF_SAMPLES,
                    HOPF_TOL,
                    &mut rng(700 + k as u64),
                );
                r.status != Status::Pass
            })
            .map(|c| FamilyLevels::new(c.to_vec()).to_string())
            .collect();
        if bad.is_empty() {
            holding.push(axiom.id());
        } else {
            failing.push(format!("{} fails on {}", axiom.id(), bad.join(" ")));
        }
    }
    let levels = FamilyLevels::constant(1, 5);
    let bracket = verify_family_axiom(
        Axiom::BracketHomomorphism,
        &levels,
        &table,
        &HopfDomain::default(),
        1,
        HOPF_TOL,
        &mut rng(799),
    );
    let bracket_ok = bracket.status == Status::NotChecked;
    let detail = if failing.is_empty() {
        format!("all axioms hold on {} level sequences (tol {HOPF_TOL:e}, {HOPF_SAMPLES} samples)", sequences.len())
    } else {
        format!("{}; holding on every sequence: {}", failing.join("; "), holding.join(" "))
    };
    Line {
        pass: failing.is_empty() && bracket_ok,
        detail: format!("{detail}; delta-bracket coproduct not-checked: {bracket_ok}"),
    }
}

fn dsl() -> Line {
    let mut ok = true;
    for src in [DEF1_SOURCE, UQ_SOURCE] {
        let doc = parse_document(src).unwrap();
        ok &= parse_document(&print_document(&doc)).ok().as_ref() == Some(&doc);
        ok &= check_parity(&doc.algebra).is_ok() && check_reciprocity(&doc.algebra).is_ok();
    }
    let mut r = rng(800);
    let mut fuzzed = 0;
    for _ in 0..FUZZ_SPECS {
        let spec = parse_spec(&random_spec_source(&mut r)).unwrap();
        if parse_spec(&print_spec(&spec)).ok().as_ref() == Some(&spec) {
            fuzzed += 1;
        }
    }
    Line {
        pass: ok && fuzzed == FUZZ_SPECS,
        detail: format!("built-ins round-trip and pass load checks: {ok}; {fuzzed}/{FUZZ_SPECS} fuzzed specs round-trip"),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Line); 8] = [
        ("discrete γ = q exchange relations, exact", discrete_exchanges),
        ("discrete γ = q anticommutator", discrete_anticommutator),
        ("kernel identities", kernels),
        ("Γ identities", gamma_identities),
        ("continuum exchange", continuum_exchange),
        ("parameter maps", param_maps),
        ("Hopf family", hopf_family),
        ("presentation language", dsl),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let line = run();
        if !line.pass {
            failed += 1;
        }
        println!("criterion {} [{}] {name}: {}", k + 1, if line.pass { "PASS" } else { "FAIL" }, line.detail);
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
