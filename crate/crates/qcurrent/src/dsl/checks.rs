use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::exact::{rand_ident_test, EvalFailure, IdentityError, Point, SampleDomain, Sampler};
use crate::symexpr::{ParamEnv, SymExpr};

/// Seed of the load-time reciprocity sampler; fixed so loading is deterministic.
const LOAD_SEED: u64 = 0x5eed_0a16;
const LOAD_SAMPLES: usize = 16;
const LOAD_TOL: f64 = 1e-9;

/// Odd-odd exchanges must carry a leading minus sign; all others must not.
pub fn check_parity(spec: &AlgebraSpec) -> Result<(), DslError> {
    for (rel, line) in spec.relations.iter().zip(&spec.lines) {
        let RelationKind::Exchange(e) = &rel.kind else { continue };
        let odd = |n: &str| spec.parity(n) == Some(Parity::Odd);
        let both_odd = odd(&e.left.name) && odd(&e.right.name);
        if both_odd != e.negative {
            let msg = if both_odd {
                format!("{}{} exchanges two odd currents without a leading minus", e.left.name, e.right.name)
            } else {
                format!("{}{} has a leading minus but is not odd-odd", e.left.name, e.right.name)
            };
            return Err(DslError { line: *line, col: 1, kind: DslErrorKind::Parity(msg) });
        }
    }
    Ok(())
}

/// A sampling domain over the free parameters of `spec` plus `vars`.
pub fn sample_env(spec: &AlgebraSpec, vars: &[&str]) -> SampleDomain {
    let mut domain = SampleDomain::new();
    for p in spec.params.iter().filter(|p| p.rule.is_none()) {
        domain = domain.with(&p.name, Sampler::default_complex());
    }
    for c in &spec.centrals {
        domain = domain.with(c, Sampler::default_complex());
    }
    for v in vars {
        domain = domain.with(v, Sampler::default_complex());
    }
    domain
}

/// Evaluate `expr` at a point carrying both parameter and variable values.
pub(crate) fn eval_at(expr: &SymExpr, rules: &[(String, SymExpr)], p: &Point) -> Result<Complex64, EvalFailure> {
    let env = ParamEnv::from_point(p, rules)?;
    Ok(expr.eval(&env, p)?)
}

impl AlgebraSpec {
    /// Derived-parameter rules in declaration order.
    pub fn rules(&self) -> Vec<(String, SymExpr)> {
        self.params.iter().filter_map(|p| p.rule.clone().map(|r| (p.name.clone(), r))).collect()
    }
}

/// `f_XY(u,v) f_YX(v,u) = 1` for `X = Y`, and for every pair given in both orders.
pub fn check_reciprocity(spec: &AlgebraSpec) -> Result<(), DslError> {
    let rules = spec.rules();
    let mut rng = ChaCha8Rng::seed_from_u64(LOAD_SEED);
    let exchanges: Vec<(&Exchange, usize)> = spec
        .relations
        .iter()
        .zip(&spec.lines)
        .filter_map(|(r, l)| match &r.kind {
            RelationKind::Exchange(e) => Some((e, *l)),
            _ => None,
        })
        .collect();
    for &(e, line) in &exchanges {
        let reverse = if e.left.name == e.right.name {
            Some(e)
        } else {
            exchanges
                .iter()
                .map(|(x, _)| *x)
                .find(|x| x.left.name == e.right.name && x.right.name == e.left.name)
        };
        let Some(rev) = reverse else { continue };
        let (u, v) = (e.left.var().unwrap_or("u"), e.right.var().unwrap_or("v"));
        let (ru, rv) = (rev.left.var().unwrap_or("u"), rev.right.var().unwrap_or("v"));
        // The reverse relation is read with its first current at `v`.
        let mut rename = BTreeMap::new();
        rename.insert(ru.to_string(), SymExpr::var(v));
        rename.insert(rv.to_string(), SymExpr::var(u));
        let f = e.structure_function();
        let g = rev.structure_function().substitute(&rename, &BTreeMap::new());
        let product = SymExpr::mul(f, g);
        let domain = sample_env(spec, &[u, v]);
        let outcome = rand_ident_test(
            |p| eval_at(&product, &rules, p),
            |_| Ok(Complex64::new(1.0, 0.0)),
            &domain,
            LOAD_SAMPLES,
            &mut rng,
        );
        let fail = |msg: String| DslError { line, col: 1, kind: DslErrorKind::Reciprocity(msg) };
        let pair = format!("{}{}", e.left.name, e.right.name);
        match outcome {
            Ok(o) if o.passes(LOAD_TOL) => {}
            Ok(o) => return Err(fail(format!("{pair}: |f(u,v) f(v,u) - 1| reaches {:.3e}", o.max_error))),
            Err(IdentityError::Evaluation { reason, .. }) => return Err(fail(format!("{pair}: {reason}"))),
            Err(other) => return Err(fail(format!("{pair}: {other}"))),
        }
    }
    Ok(())
}
