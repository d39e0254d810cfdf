use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;

use super::{Check, ConfigError, MaxError, Mode, Outcome, Status, Suite, SuiteConfig};
use crate::continuum::{
    eta_invariance, verify_continuum_exchange, verify_derived_brackets, verify_gamma_identities, ContinuumRep,
    ExchangeDomain, KernelDomain, KernelSet, KernelVariant, Orientation,
};
use crate::dsl::{
    check_parity, check_reciprocity, fuzz::random_spec_source, parse_document, parse_spec, print_document,
    print_spec, verify_param_map, AlgebraSpec, Document, ParamMap, DEF1_SOURCE, UQ_SOURCE,
};
use crate::hopf::{verify_family_axiom, Axiom, ExchangeTable, FamilyLevels, HopfDomain};
use crate::vertex::{verify_delta_bracket, verify_exchange, Realization, VertexError};

pub const DEF1_PAIRS: [(&str, &str); 9] = [
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

pub const UQ_PAIRS: [(&str, &str); 9] = [
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

/// Realization used by the discrete suite.
pub const DISCRETE_REALIZATION: &str = "gamma_q_amended";

/// Level sequences `c_0 .. c_4` for the Hopf suite.
pub const HOPF_LEVELS: [[i64; 5]; 5] = [[0; 5], [1; 5], [2; 5], [0, 1, 2, 0, 1], [2, 1, 0, 2, 1]];

const EXCHANGE_TOL: f64 = 1e-6;
const ETA_TOL: f64 = 1e-8;
const KERNEL_TOL: f64 = 1e-10;
const ANTISYMMETRY_TOL: f64 = 1e-12;
const SLOPE_TOL: f64 = 1e-6;
const QUADRATURE_TOL: f64 = 1e-6;
const REFLECTION_TOL: f64 = 1e-10;
const LIMIT_TOL: f64 = 1e-6;
const PARAM_TOL: f64 = 1e-10;
const HOPF_TOL: f64 = 1e-8;

/// Built-in definitions, parsed once per run.
pub struct Builtins {
    pub def1: AlgebraSpec,
    pub uq: Document,
    pub discrete: Realization,
    pub level_one: ContinuumRep,
    pub gamma_sqrt_q: ContinuumRep,
    pub table: ExchangeTable,
}

impl Builtins {
    pub fn load(order: usize) -> Result<Self, ConfigError> {
        let err = |e: &dyn std::fmt::Display| ConfigError::Builtin(e.to_string());
        let def1 = parse_spec(DEF1_SOURCE).map_err(|e| err(&e))?;
        let uq = parse_document(UQ_SOURCE).map_err(|e| err(&e))?;
        let spec = uq
            .realizations
            .iter()
            .find(|r| r.name == DISCRETE_REALIZATION)
            .ok_or_else(|| ConfigError::Builtin(format!("no realization {DISCRETE_REALIZATION}")))?;
        let discrete = Realization::from_spec(spec).map_err(|e| err(&e))?.with_series_order(order);
        let table = ExchangeTable::from_spec(&def1).map_err(|e| err(&e))?;
        Ok(Builtins {
            def1,
            uq,
            discrete,
            level_one: ContinuumRep::level_one(Orientation::Flipped),
            gamma_sqrt_q: ContinuumRep::gamma_sqrt_q(Orientation::Flipped),
            table,
        })
    }
}

fn numeric(max_error: f64, tol: f64, samples: usize) -> Outcome {
    let status = if max_error <= tol { Status::Pass } else { Status::Fail };
    Outcome {
        status,
        mode: Mode::Numeric,
        max_error: MaxError::Value(max_error),
        tolerance: Some(tol),
        samples,
        constants: BTreeMap::new(),
        reason: None,
    }
}

fn exact(result: Result<(), String>, samples: usize) -> Outcome {
    let (status, max_error) = match &result {
        Ok(()) => (Status::Pass, MaxError::ExactZero),
        Err(e) => (Status::Fail, MaxError::Counterexample(e.clone())),
    };
    Outcome { status, mode: Mode::Exact, max_error, tolerance: None, samples, constants: BTreeMap::new(), reason: None }
}

fn errored(mode: Mode, tolerance: Option<f64>, e: impl std::fmt::Display) -> Outcome {
    Outcome {
        status: Status::Fail,
        mode,
        max_error: MaxError::None,
        tolerance,
        samples: 0,
        constants: BTreeMap::new(),
        reason: Some(e.to_string()),
    }
}

fn not_checked(mode: Mode, reason: &str) -> Outcome {
    Outcome {
        status: Status::NotChecked,
        mode,
        max_error: MaxError::None,
        tolerance: None,
        samples: 0,
        constants: BTreeMap::new(),
        reason: Some(reason.to_string()),
    }
}

fn order_limited(e: &VertexError) -> Option<Outcome> {
    matches!(e, VertexError::SeriesOnly(..)).then(|| Outcome {
        status: Status::OrderLimited,
        mode: Mode::Exact,
        max_error: MaxError::None,
        tolerance: None,
        samples: 0,
        constants: BTreeMap::new(),
        reason: Some(e.to_string()),
    })
}

fn vertex_failure(e: VertexError) -> Outcome {
    order_limited(&e).unwrap_or_else(|| errored(Mode::Exact, None, e))
}

pub(super) fn checks(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::DiscreteExact => discrete_checks(),
        Suite::ContinuumNumeric => continuum_checks(),
        Suite::Hopf => hopf_checks(),
        Suite::ParamMaps => param_map_checks(),
        Suite::DslRoundtrip => dsl_checks(),
    }
}

fn discrete_checks() -> Vec<Check> {
    const EXCHANGE: &str = "discrete γ = q realization: exchange relations of the quantum affine currents";
    const BRACKET: &str = "discrete γ = q realization: X+X- anticommutator poles, fused operators and constants";
    const LIMIT: &str = "discrete γ = q realization: finite q → 1 limit of the anticommutator";
    let mut out: Vec<Check> = UQ_PAIRS
        .iter()
        .map(|&(x, y)| {
            Check::new(format!("discrete.exchange.{x}{y}"), EXCHANGE, move |b, _, _| {
                match verify_exchange(&b.discrete, &b.uq.algebra, x, y) {
                    Ok(c) if c.passes() => exact(Ok(()), 0),
                    Ok(c) => exact(Err(format!("ratio/target = {}", c.quotient)), 0),
                    Err(e) => vertex_failure(e),
                }
            })
        })
        .collect();
    out.push(Check::new("discrete.bracket.X+X-", BRACKET, |b, _, _| {
        match verify_delta_bracket(&b.discrete, &b.uq.algebra, "X+", "X-") {
            Ok(c) => {
                let problem = if !c.ordering_ok() {
                    Some(format!("ordering factor {} instead of {}", c.ordering, c.expected_ordering))
                } else if !c.unmatched_terms.is_empty() {
                    Some(format!("bracket terms {:?} have no pole", c.unmatched_terms))
                } else if let Some(p) = c.poles.iter().find(|p| p.order != 1 || p.term.is_none()) {
                    Some(format!("pole at {} of order {} is unmatched", p.location, p.order))
                } else if !c.constants_equal {
                    Some("fitted delta constants differ".to_string())
                } else {
                    None
                };
                let mut o = exact(problem.map_or(Ok(()), Err), 0);
                for (k, p) in c.poles.iter().enumerate() {
                    if let Some(constant) = &p.constant {
                        o.constants.insert(format!("delta[{}]", p.location), constant.to_string());
                    }
                    o.constants.insert(format!("pole-{k}"), p.location.to_string());
                }
                o
            }
            Err(e) => vertex_failure(e),
        }
    }));
    out.push(Check::new("discrete.bracket-limit.X+X-", LIMIT, |b, cfg, _| {
        let tol = cfg.tol_or(LIMIT_TOL);
        match verify_delta_bracket(&b.discrete, &b.uq.algebra, "X+", "X-") {
            Ok(c) => match &c.limit {
                Some(l) if l.finite => {
                    let mut o = numeric(l.drift, tol, l.q.len());
                    for (k, pair) in l.constants.iter().enumerate() {
                        o.constants.insert(format!("delta-{k}@q={}", l.q[1]), format!("{:.12}", pair[1]));
                    }
                    o
                }
                Some(_) => errored(Mode::Numeric, Some(tol), "constants diverge as q -> 1"),
                None => errored(Mode::Numeric, Some(tol), "no limit probe available"),
            },
            Err(e) => order_limited(&e).unwrap_or_else(|| errored(Mode::Numeric, Some(tol), e)),
        }
    }));
    out
}

fn kernel_variants() -> [(KernelVariant, &'static str); 2] {
    [
        (KernelVariant::HbarEta, "continuum kernels A, B with mixing functions: composite brackets at level one"),
        (KernelVariant::GammaSqrtQ, "continuum kernels of the second family: composite brackets"),
    ]
}

fn continuum_checks() -> Vec<Check> {
    const GAMMA: &str = "keyhole contour integral against its ln Γ closed form";
    const REFLECTION: &str = "reflection formula Γ(z)Γ(1 - z) = π / sin πz";
    const RECURRENCE: &str = "ln Γ recurrence against the reference evaluation";
    const SLOPES: &str = "small-λ slopes of the kernels A and B";
    const ANTISYM: &str = "antisymmetry of A and B under λ → -λ";
    const C1: &str = "continuum c = 1 realization: exchange relations of the additive currents";
    const SQRT_Q: &str = "continuum γ = q^(1/2) realization: exchange relations of the quantum affine currents";
    const ETA: &str = "continuum γ = q^(1/2) realization: η-independence at fixed z, w, q";
    const ANT: &str = "continuum c = 1 realization: E-F delta bracket";
    let mut out = Vec::new();
    for (variant, anchor) in kernel_variants() {
        let name = variant.name();
        out.push(Check::new(format!("continuum.kernels.{name}"), anchor, move |_, cfg, rng| {
            let tol = cfg.tol_or(KERNEL_TOL);
            let samples = cfg.samples_or(200);
            match verify_derived_brackets(&KernelSet::new(variant), KernelDomain::default(), samples, rng) {
                Ok(r) => numeric(r.max_error(), tol, samples),
                Err(e) => errored(Mode::Numeric, Some(tol), e),
            }
        }));
        out.push(Check::new(format!("continuum.kernel-antisymmetry.{name}"), ANTISYM, move |_, cfg, rng| {
            let tol = cfg.tol_or(ANTISYMMETRY_TOL);
            let samples = cfg.samples_or(200);
            match verify_derived_brackets(&KernelSet::new(variant), KernelDomain::default(), samples, rng) {
                Ok(r) => numeric(r.antisymmetry, tol, samples),
                Err(e) => errored(Mode::Numeric, Some(tol), e),
            }
        }));
        out.push(Check::new(format!("continuum.kernel-slopes.{name}"), SLOPES, move |_, cfg, rng| {
            use rand::Rng;
            let tol = cfg.tol_or(SLOPE_TOL);
            let samples = cfg.samples_or(20);
            let ks = KernelSet::new(variant);
            let d = KernelDomain::default();
            let mut worst = 0.0f64;
            for _ in 0..samples {
                let hbar = rng.gen_range(d.hbar.0..d.hbar.1);
                let eta = rng.gen_range(d.eta.0..d.eta.1);
                match ks.slopes(hbar, eta) {
                    Ok((sa, sb)) => {
                        let (ea, eb) = ks.expected_slopes(hbar, eta);
                        worst = worst.max((sa - ea).abs()).max((sb - eb).abs());
                    }
                    Err(e) => return errored(Mode::Numeric, Some(tol), e),
                }
            }
            numeric(worst, tol, samples)
        }));
    }
    out.push(Check::new("continuum.gamma.quadrature", GAMMA, |_, cfg, rng| {
        let tol = cfg.tol_or(QUADRATURE_TOL);
        let samples = cfg.samples_or(20);
        match verify_gamma_identities(samples, 1e-10, rng) {
            Ok(r) => numeric(r.quadrature, tol, samples),
            Err(e) => errored(Mode::Numeric, Some(tol), e),
        }
    }));
    out.push(Check::new("continuum.gamma.reflection", REFLECTION, |_, cfg, rng| {
        let tol = cfg.tol_or(REFLECTION_TOL);
        let samples = cfg.samples_or(20);
        match verify_gamma_identities(samples, 1e-10, rng) {
            Ok(r) => numeric(r.reflection, tol, samples),
            Err(e) => errored(Mode::Numeric, Some(tol), e),
        }
    }));
    out.push(Check::new("continuum.gamma.recurrence", RECURRENCE, |_, cfg, rng| {
        let tol = cfg.tol_or(REFLECTION_TOL);
        let samples = cfg.samples_or(20);
        match verify_gamma_identities(samples, 1e-10, rng) {
            Ok(r) => numeric(r.stirling, tol, samples),
            Err(e) => errored(Mode::Numeric, Some(tol), e),
        }
    }));
    for (rep_name, pairs, anchor) in [("c1", DEF1_PAIRS, C1), ("gamma_sqrt_q", UQ_PAIRS, SQRT_Q)] {
        for (x, y) in pairs {
            out.push(Check::new(format!("continuum.exchange.{rep_name}.{x}{y}"), anchor, move |b, cfg, rng| {
                let tol = cfg.tol_or(EXCHANGE_TOL);
                let samples = cfg.samples_or(50);
                let (rep, alg) = if rep_name == "c1" {
                    (&b.level_one, &b.def1)
                } else {
                    (&b.gamma_sqrt_q, &b.uq.algebra)
                };
                let domain = ExchangeDomain { shifts: cfg.shifts, ..ExchangeDomain::default() };
                match verify_continuum_exchange(rep, alg, x, y, domain, samples, tol, rng) {
                    Ok(r) => {
                        let mut o = numeric(r.max_error, tol, samples);
                        o.constants.insert("shifts".into(), r.shifts.to_string());
                        o.constants.insert("shift-drift".into(), format!("{:.3e}", r.drift));
                        if !r.converged {
                            o.status = Status::Fail;
                            o.reason = Some(format!("drift {:.3e} exceeds tol/10 at depth {}", r.drift, r.shifts));
                        }
                        o
                    }
                    Err(e) => errored(Mode::Numeric, Some(tol), e),
                }
            }));
        }
    }
    for (x, y) in UQ_PAIRS {
        out.push(Check::new(format!("continuum.eta-invariance.gamma_sqrt_q.{x}{y}"), ETA, move |b, cfg, rng| {
            let tol = cfg.tol_or(ETA_TOL);
            let samples = cfg.samples_or(50);
            let domain = ExchangeDomain { shifts: cfg.shifts, ..ExchangeDomain::default() };
            match eta_invariance(&b.gamma_sqrt_q, x, y, domain, samples, rng) {
                Ok(w) => numeric(w, tol, samples),
                Err(e) => errored(Mode::Numeric, Some(tol), e),
            }
        }));
    }
    out.push(Check::new("continuum.bracket.c1.EF", ANT, |_, _, _| {
        not_checked(
            Mode::Numeric,
            "the continuum E-F bracket is distribution-valued; its delta terms are out of numeric reach",
        )
    }));
    out
}

fn hopf_checks() -> Vec<Check> {
    const COSTRUCTURE: &str = "infinite Hopf family: co-structure axioms on generators";
    const HOMOMORPHISM: &str = "infinite Hopf family: coproducts respect the exchange relations";
    const BRACKET: &str = "infinite Hopf family: coproducts on the E-F delta bracket";
    let mut out = Vec::new();
    for axiom in Axiom::ALL {
        if axiom == Axiom::BracketHomomorphism {
            continue;
        }
        let anchor = match axiom {
            Axiom::Homomorphism(_) | Axiom::AntipodeAnti => HOMOMORPHISM,
            _ => COSTRUCTURE,
        };
        for c in HOPF_LEVELS {
            let levels = FamilyLevels::new(c.to_vec());
            let digits: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            let id = format!("hopf.{}.c={}", axiom.id(), digits.join(","));
            out.push(Check::new(id, anchor, move |b, cfg, rng| hopf_outcome(axiom, &levels, b, cfg, rng)));
        }
    }
    out.push(Check::new(format!("hopf.{}", Axiom::BracketHomomorphism.id()), BRACKET, |_, _, _| {
        not_checked(
            Mode::Numeric,
            "coproducts on the delta bracket multiply distributions with operator coefficients; outside the rewriting model",
        )
    }));
    out
}

fn hopf_outcome(
    axiom: Axiom,
    levels: &FamilyLevels,
    b: &Builtins,
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
) -> Outcome {
    let tol = cfg.tol_or(HOPF_TOL);
    let samples = cfg.samples_or(50);
    let r = verify_family_axiom(axiom, levels, &b.table, &HopfDomain::default(), samples, tol, rng);
    let status = match r.status {
        crate::hopf::Status::Pass => Status::Pass,
        crate::hopf::Status::Fail => Status::Fail,
        crate::hopf::Status::NotChecked => Status::NotChecked,
    };
    let reason = r.failures().next().map(|f| match &f.mismatch {
        Some(m) => format!("{}: {m}", f.subject),
        None => format!("{}: error {:.3e}", f.subject, f.max_error),
    });
    let (mode, max_error, tolerance) = if axiom.is_exact() {
        let e = match &reason {
            None => MaxError::ExactZero,
            Some(m) => MaxError::Counterexample(m.clone()),
        };
        (Mode::Exact, e, None)
    } else {
        let worst = r.max_error();
        let e = if worst.is_finite() { MaxError::Value(worst) } else { MaxError::None };
        (Mode::Numeric, e, Some(tol))
    };
    let samples = if axiom.is_exact() { 0 } else { r.samples() };
    Outcome { status, mode, max_error, tolerance, samples, constants: BTreeMap::new(), reason }
}

fn param_map_checks() -> Vec<Check> {
    const RAISING: &str = "evaluation map on the η branch: E-type exchange factors";
    const LOWERING: &str = "evaluation map on the η' branch: F-type exchange factors";
    const DEGENERATION: &str = "c = 0, γ = 1 evaluation map: all relations and delta coefficients";
    let maps: [(&str, fn() -> ParamMap, &str); 3] = [
        ("raising", ParamMap::raising, RAISING),
        ("lowering", ParamMap::lowering, LOWERING),
        ("degeneration", ParamMap::degeneration, DEGENERATION),
    ];
    maps.into_iter()
        .map(|(name, build, anchor)| {
            Check::new(format!("param-maps.{name}"), anchor, move |b, cfg, rng| {
                let tol = cfg.tol_or(PARAM_TOL);
                let samples = cfg.samples_or(100);
                match verify_param_map(&b.def1, &b.uq.algebra, &build(), samples, rng) {
                    Ok(r) => {
                        let mut o = numeric(r.max_error(), tol, samples);
                        for t in &r.transports {
                            o.constants.insert(format!("J[{}]", t.current), format!("{:.12}", t.constant));
                        }
                        o.constants.insert("relations".into(), r.relations.len().to_string());
                        o
                    }
                    Err(e) => errored(Mode::Numeric, Some(tol), e),
                }
            })
        })
        .collect()
}

fn dsl_checks() -> Vec<Check> {
    const ROUNDTRIP: &str = "presentation language: parse, print, parse is the identity";
    const LOADTIME: &str = "presentation language: reciprocity and parity checks at load time";
    const FUZZ: &str = "presentation language: round trip of randomly generated algebras";
    let mut out = Vec::new();
    for (name, src) in [("def1", DEF1_SOURCE), ("uq_osp22", UQ_SOURCE)] {
        out.push(Check::new(format!("dsl.roundtrip.{name}"), ROUNDTRIP, move |_, _, _| {
            exact(document_round_trip(src), 0)
        }));
        out.push(Check::new(format!("dsl.load-checks.{name}"), LOADTIME, move |_, _, _| {
            let r = parse_spec(src).map_err(|e| e.to_string()).and_then(|spec| {
                check_parity(&spec).map_err(|e| e.to_string())?;
                check_reciprocity(&spec).map_err(|e| e.to_string())
            });
            exact(r, 0)
        }));
    }
    out.push(Check::new("dsl.fuzz-roundtrip", FUZZ, |_, cfg, rng| {
        let samples = cfg.samples_or(20);
        let mut result = Ok(());
        for k in 0..samples {
            if let Err(e) = spec_round_trip(&random_spec_source(rng)) {
                result = Err(format!("spec {k}: {e}"));
                break;
            }
        }
        exact(result, samples)
    }));
    out
}

fn document_round_trip(src: &str) -> Result<(), String> {
    let doc = parse_document(src).map_err(|e| e.to_string())?;
    let printed = print_document(&doc);
    let again = parse_document(&printed).map_err(|e| format!("reparse: {e}"))?;
    if doc != again {
        return Err("reparsed document differs".into());
    }
    Ok(())
}

fn spec_round_trip(src: &str) -> Result<(), String> {
    let spec = parse_spec(src).map_err(|e| e.to_string())?;
    let printed = print_spec(&spec);
    let again = parse_spec(&printed).map_err(|e| format!("reparse: {e}"))?;
    if spec != again {
        return Err("reparsed algebra differs".into());
    }
    Ok(())
}
