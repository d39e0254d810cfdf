use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::checks::eval_at;
use super::*;
use crate::exact::{rand_ident_test, rel_error, EvalFailure, IdentityError, Point, SampleDomain, Sampler};
use crate::symexpr::{Func, ParamEnv, SymExpr};

/// Where a source current goes: `src(u) -> prefactor(u) * dst(z)`.
#[derive(Clone, Debug)]
pub struct CurrentMap {
    pub src: String,
    pub dst: String,
    /// Expression in the source variable `u`, the image variable `z`,
    /// and the parameters on both sides.
    pub prefactor: SymExpr,
}

/// A homomorphism between presentations given by substitutions.
#[derive(Clone, Debug)]
pub struct ParamMap {
    pub name: String,
    /// Source parameters pinned before anything else, e.g. `c = 0`.
    pub fixed: Vec<(String, SymExpr)>,
    /// The image spectral variable as an expression in the source variable `u`.
    pub spectral: SymExpr,
    /// Destination parameters in terms of source parameters.
    pub params: Vec<(String, SymExpr)>,
    pub currents: Vec<CurrentMap>,
    /// Samplers for the free source parameters.
    pub domain: Vec<(String, Sampler)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheck {
    pub src: String,
    pub dst: String,
    pub max_error: f64,
}

/// The constant `J` with `delta_add = J * delta_mult` needed to match one
/// bracket term, sampled along the support.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaTransport {
    pub current: String,
    pub constant: Complex64,
    /// Largest relative deviation of `J` from `constant` across samples.
    pub spread: f64,
    /// Largest distance of the image support from the destination support.
    pub support_error: f64,
    /// Largest mismatch between the mapped and the destination current arguments.
    pub argument_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamMapReport {
    pub relations: Vec<RelationCheck>,
    pub transports: Vec<DeltaTransport>,
    pub samples: usize,
}

impl ParamMapReport {
    /// The worst error over relations, transport spreads and the cross-term
    /// agreement of the transport constants.
    pub fn max_error(&self) -> f64 {
        let mut e = self.relations.iter().map(|r| r.max_error).fold(0.0, f64::max);
        for t in &self.transports {
            e = e.max(t.spread).max(t.support_error).max(t.argument_error);
        }
        if let Some(first) = self.transports.first() {
            for t in &self.transports[1..] {
                e = e.max(rel_error(first.constant, t.constant));
            }
        }
        e
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_error() <= tol
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParamMapError {
    #[error("no destination relation for {0}")]
    Unmatched(String),
    #[error("current `{0}` has no image")]
    Unmapped(String),
    #[error("{relation}: {source}")]
    Identity { relation: String, source: IdentityError },
    #[error("{relation}: {reason}")]
    Evaluation { relation: String, reason: String },
}

fn u() -> SymExpr {
    SymExpr::var("u")
}

fn p(name: &str) -> SymExpr {
    SymExpr::param(name)
}

fn two_pi() -> SymExpr {
    SymExpr::mul(SymExpr::num(2), SymExpr::pi())
}

fn additive_domain() -> Vec<(String, Sampler)> {
    vec![
        ("eta".into(), Sampler::Real { lo: 0.3, hi: 1.2 }),
        ("hbar".into(), Sampler::Real { lo: 0.05, hi: 0.4 }),
        ("c".into(), Sampler::Real { lo: 0.0, hi: 2.0 }),
    ]
}

impl ParamMap {
    /// `E(u) -> X+(z)` with `z = exp(2 pi eta u)`, `q = exp(2 pi i eta hbar)`.
    pub fn raising() -> Self {
        let eta = p("eta");
        ParamMap {
            name: "raising".into(),
            fixed: Vec::new(),
            spectral: SymExpr::call(Func::Exp, SymExpr::mul(SymExpr::mul(two_pi(), eta.clone()), u())),
            params: vec![(
                "q".into(),
                SymExpr::call(
                    Func::Exp,
                    SymExpr::mul(SymExpr::mul(SymExpr::mul(two_pi(), SymExpr::i()), eta), p("hbar")),
                ),
            )],
            currents: vec![CurrentMap { src: "E".into(), dst: "X+".into(), prefactor: SymExpr::num(1) }],
            domain: additive_domain(),
        }
    }

    /// `F(u) -> X-(z)` with `z = exp(2 pi eta' u)`, `q' = exp(2 pi i eta' hbar)`.
    pub fn lowering() -> Self {
        let eta = p("eta'");
        ParamMap {
            name: "lowering".into(),
            fixed: Vec::new(),
            spectral: SymExpr::call(Func::Exp, SymExpr::mul(SymExpr::mul(two_pi(), eta.clone()), u())),
            params: vec![(
                "q".into(),
                SymExpr::call(
                    Func::Exp,
                    SymExpr::mul(SymExpr::mul(SymExpr::mul(two_pi(), SymExpr::i()), eta), p("hbar")),
                ),
            )],
            currents: vec![CurrentMap { src: "F".into(), dst: "X-".into(), prefactor: SymExpr::num(1) }],
            domain: additive_domain(),
        }
    }

    /// The full map at `c = 0`, `gamma = 1`: `E -> sqrt(2) z X+`,
    /// `F -> sqrt(2) z X-`, `(2 pi/hbar) H± -> psi±/(q - 1/q)`.
    pub fn degeneration() -> Self {
        let mut m = ParamMap::raising();
        m.name = "degeneration".into();
        m.fixed = vec![("c".into(), SymExpr::num(0))];
        m.params.push(("gamma".into(), SymExpr::num(1)));
        m.domain.retain(|(n, _)| n != "c");
        let root2z = SymExpr::mul(SymExpr::call(Func::Sqrt, SymExpr::num(2)), SymExpr::var("z"));
        let h = SymExpr::div(
            SymExpr::div(p("hbar"), two_pi()),
            SymExpr::sub(p("q"), SymExpr::pow(p("q"), SymExpr::num(-1))),
        );
        m.currents = vec![
            CurrentMap { src: "E".into(), dst: "X+".into(), prefactor: root2z.clone() },
            CurrentMap { src: "F".into(), dst: "X-".into(), prefactor: root2z },
            CurrentMap { src: "H+".into(), dst: "psi+".into(), prefactor: h.clone() },
            CurrentMap { src: "H-".into(), dst: "psi-".into(), prefactor: h },
        ];
        m
    }

    fn image(&self, name: &str) -> Option<&CurrentMap> {
        self.currents.iter().find(|c| c.src == name)
    }

    fn rules(&self, src: &AlgebraSpec) -> Vec<(String, SymExpr)> {
        let mut rules = self.fixed.clone();
        rules.extend(src.rules());
        rules.extend(self.params.iter().cloned());
        rules
    }

    fn sample_domain(&self, vars: &[&str]) -> SampleDomain {
        let mut d = SampleDomain::new();
        for (n, s) in &self.domain {
            d = d.with(n, s.clone());
        }
        for v in vars {
            d = d.with(v, Sampler::Box { re: (-0.4, 0.4), im: (-0.4, 0.4) });
        }
        d
    }

    /// The image variable for a source argument expression.
    fn spectral_of(&self, arg: &SymExpr) -> SymExpr {
        let mut m = BTreeMap::new();
        m.insert("u".to_string(), arg.clone());
        self.spectral.substitute(&m, &BTreeMap::new())
    }
}

fn eval_vars(expr: &SymExpr, env: &ParamEnv, vars: &[(&str, Complex64)]) -> Result<Complex64, EvalFailure> {
    let point: Point = vars.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    Ok(expr.eval(env, &point)?)
}

/// Check that `map` carries every exchange relation among mapped source
/// currents onto the corresponding destination relation, and, for brackets
/// whose currents are all mapped, fit the delta transport constants.
pub fn verify_param_map(
    src: &AlgebraSpec,
    dst: &AlgebraSpec,
    map: &ParamMap,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<ParamMapReport, ParamMapError> {
    let rules = map.rules(src);
    let mut relations = Vec::new();
    for e in src.exchanges() {
        let (Some(x), Some(y)) = (map.image(&e.left.name), map.image(&e.right.name)) else { continue };
        let label = format!("{}{}", e.left.name, e.right.name);
        let target = dst
            .exchange(&x.dst, &y.dst)
            .ok_or_else(|| ParamMapError::Unmatched(label.clone()))?;
        let (su, sv) = (e.left.var().unwrap_or("u"), e.right.var().unwrap_or("v"));
        let (dz, dw) = (target.left.var().unwrap_or("z"), target.right.var().unwrap_or("w"));
        let zexpr = map.spectral_of(&SymExpr::var(su));
        let wexpr = map.spectral_of(&SymExpr::var(sv));
        let f = e.structure_function();
        let g = target.structure_function();
        let outcome = rand_ident_test(
            |pt| eval_at(&f, &rules, pt),
            |pt| {
                let env = ParamEnv::from_point(pt, &rules)?;
                let z = zexpr.eval(&env, pt)?;
                let w = wexpr.eval(&env, pt)?;
                eval_vars(&g, &env, &[(dz, z), (dw, w)])
            },
            &map.sample_domain(&[su, sv]),
            samples,
            rng,
        )
        .map_err(|source| ParamMapError::Identity { relation: label.clone(), source })?;
        relations.push(RelationCheck {
            src: label,
            dst: format!("{}{}", x.dst, y.dst),
            max_error: outcome.max_error,
        });
    }

    let mut transports = Vec::new();
    for b in src.brackets() {
        let mapped = |n: &str| map.image(n).is_some();
        if !(mapped(&b.left.name) && mapped(&b.right.name) && b.terms.iter().all(|t| mapped(&t.current.name))) {
            continue;
        }
        let (x, y) = (map.image(&b.left.name).unwrap(), map.image(&b.right.name).unwrap());
        let label = format!("{{{},{}}}", b.left.name, b.right.name);
        let target = dst
            .bracket(&x.dst, &y.dst)
            .ok_or_else(|| ParamMapError::Unmatched(label.clone()))?;
        for term in &b.terms {
            let t_map = map.image(&term.current.name).unwrap();
            let dterm = target
                .terms
                .iter()
                .find(|d| d.current.name == t_map.dst)
                .ok_or_else(|| ParamMapError::Unmatched(format!("{label} -> {}", t_map.dst)))?;
            let fit = transport_term(map, &rules, b, term, dterm, target, (x, y, t_map), samples, rng)
                .map_err(|reason| ParamMapError::Evaluation { relation: label.clone(), reason })?;
            transports.push(fit);
        }
    }
    Ok(ParamMapReport { relations, transports, samples })
}

fn support_point(kind: DeltaKind) -> Complex64 {
    match kind {
        DeltaKind::Additive => Complex64::new(0.0, 0.0),
        DeltaKind::Multiplicative => Complex64::new(1.0, 0.0),
    }
}

#[allow(clippy::too_many_arguments)]
fn transport_term(
    map: &ParamMap,
    rules: &[(String, SymExpr)],
    b: &Bracket,
    term: &DeltaTerm,
    dterm: &DeltaTerm,
    target: &Bracket,
    (x, y, t): (&CurrentMap, &CurrentMap, &CurrentMap),
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<DeltaTransport, String> {
    let (su, sv) = (b.left.var().unwrap_or("u"), b.right.var().unwrap_or("v"));
    let (dz, dw) = (target.left.var().unwrap_or("z"), target.right.var().unwrap_or("w"));
    let domain = map.sample_domain(&[su]);
    let mut values = Vec::new();
    let (mut support_error, mut argument_error) = (0.0f64, 0.0f64);
    let fail = |e: EvalFailure| format!("{e:?}");
    while values.len() < samples {
        let mut pt = domain.draw(rng).ok_or("sampling domain exhausted")?;
        let env = ParamEnv::from_point(&pt, rules).map_err(|e| e.to_string())?;
        // The support is affine in the second variable: two evaluations locate it.
        let (v0, v1) = (Complex64::new(rng.gen_range(-0.3..0.3), 0.0), Complex64::new(0.5, 0.1));
        let s_at = |v: Complex64, pt: &mut Point| {
            pt.insert(sv.to_string(), v);
            term.support.eval(&env, pt).map(|s| s - support_point(term.kind))
        };
        let (f0, f1) = (s_at(v0, &mut pt).map_err(|e| e.to_string())?, s_at(v1, &mut pt).map_err(|e| e.to_string())?);
        if (f1 - f0).norm() < 1e-12 {
            return Err("support does not depend on the second variable".into());
        }
        let v = v0 - f0 * (v1 - v0) / (f1 - f0);
        pt.insert(sv.to_string(), v);
        let uval = pt[su];
        let z = map.spectral_of(&SymExpr::var(su)).eval(&env, &pt).map_err(|e| e.to_string())?;
        let w = map.spectral_of(&SymExpr::var(sv)).eval(&env, &pt).map_err(|e| e.to_string())?;
        let dvars = [(dz, z), (dw, w)];
        let px = eval_vars(&x.prefactor, &env, &[("u", uval), ("z", z)]).map_err(fail)?;
        let py = eval_vars(&y.prefactor, &env, &[("u", v), ("z", w)]).map_err(fail)?;
        let arg = term.current.arg.eval(&env, &pt).map_err(|e| e.to_string())?;
        let zarg = map.spectral_of(&term.current.arg).eval(&env, &pt).map_err(|e| e.to_string())?;
        let pt_pref = eval_vars(&t.prefactor, &env, &[("u", arg), ("z", zarg)]).map_err(fail)?;
        let coef = term.coef.eval(&env, &pt).map_err(|e| e.to_string())?;
        let dcoef = eval_vars(&dterm.coef, &env, &dvars).map_err(fail)?;
        let dsupport = eval_vars(&dterm.support, &env, &dvars).map_err(fail)?;
        let darg = eval_vars(&dterm.current.arg, &env, &dvars).map_err(fail)?;
        support_error = support_error.max((dsupport - support_point(dterm.kind)).norm());
        argument_error = argument_error.max(rel_error(darg, zarg));
        values.push(px * py * dcoef / (coef * pt_pref));
    }
    let constant = values[0];
    let spread = values.iter().map(|v| rel_error(*v, constant)).fold(0.0, f64::max);
    Ok(DeltaTransport { current: dterm.current.name.clone(), constant, spread, support_error, argument_error })
}
