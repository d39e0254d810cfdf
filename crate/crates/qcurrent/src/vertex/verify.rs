use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::One;

use super::{ContractionResult, Factor, Realization, VertexError, VertexOp, RATIO_VAR};
use crate::dsl::{AlgebraSpec, CurrentRef, DeltaKind, Parity};
use crate::exact::RatFunc;
use crate::fock::ZeroScalar;

/// Series order used when a contraction has no closed product form.
pub const ORDER_LIMIT: usize = 24;

/// `q` values used to probe the `q -> 1` limit of a delta bracket.
const LIMIT_POINTS: [f64; 2] = [1.0 + 1e-6, 1.0 + 1e-8];

/// Outcome of comparing a realized exchange factor with its structure function.
#[derive(Clone, Debug)]
pub struct ExchangeCheck {
    pub left: String,
    pub right: String,
    /// `contract(X(u), Y(v)) / contract(Y(v), X(u))`.
    pub ratio: RatFunc,
    pub target: RatFunc,
    /// `ratio / target`; identically one when the relation holds.
    pub quotient: RatFunc,
}

impl ExchangeCheck {
    pub fn passes(&self) -> bool {
        self.quotient.is_one()
    }
}

fn var_of<'a>(c: &'a CurrentRef, what: &str) -> Result<&'a str, VertexError> {
    c.var().ok_or_else(|| VertexError::Unsupported(format!("{what} argument `{}` is not a bare variable", c.arg)))
}

fn ratio_of(c1: &ContractionResult, c2: &ContractionResult) -> Result<RatFunc, VertexError> {
    Ok(c1.to_ratfunc()?.div(&c2.to_ratfunc()?)?)
}

/// Check the exchange relation `X(u) Y(v) = f(u, v) Y(v) X(u)` of `alg` in `real`.
pub fn verify_exchange(
    real: &Realization,
    alg: &AlgebraSpec,
    x: &str,
    y: &str,
) -> Result<ExchangeCheck, VertexError> {
    let e = alg
        .exchange(x, y)
        .ok_or_else(|| VertexError::Unsupported(format!("{} has no exchange relation for {x}{y}", alg.name)))?;
    let (u, v) = (var_of(&e.left, "exchange")?, var_of(&e.right, "exchange")?);
    let a = real.vertex(x)?.renamed(u)?;
    let b = real.vertex(y)?.renamed(v)?;
    let ratio = ratio_of(&real.contract(&a, &b)?, &real.contract(&b, &a)?)?;
    let target = e.structure_function().to_ratfunc(&real.lets)?;
    let quotient = ratio.div(&target)?;
    Ok(ExchangeCheck { left: x.to_string(), right: y.to_string(), ratio, target, quotient })
}

/// One pole of the contraction factor and the bracket term it produces.
#[derive(Clone, Debug)]
pub struct DeltaPole {
    /// Pole in `inner/outer`.
    pub location: RatFunc,
    pub order: u32,
    /// Coefficient of the delta function: zero-mode scalar times pole residue.
    pub weight: RatFunc,
    /// Index of the bracket term whose support and current match this pole.
    pub term: Option<usize>,
    /// `:X(u) Y(location*u):` as a vertex operator.
    pub fused: VertexOp,
    /// `weight / coefficient` of the matched term.
    pub constant: Option<RatFunc>,
}

/// The `q -> 1` probe: the fitted constants and pole locations at two
/// values of `q` close to one. `drift` compares the constants only.
#[derive(Clone, Debug)]
pub struct LimitCheck {
    pub q: [f64; 2],
    pub constants: Vec<[Complex64; 2]>,
    pub locations: Vec<[Complex64; 2]>,
    pub finite: bool,
    pub drift: f64,
}

#[derive(Clone, Debug)]
pub struct DeltaCheck {
    pub left: String,
    pub right: String,
    pub ordering: RatFunc,
    /// `-1` for an anticommutator and `+1` for a commutator.
    pub expected_ordering: RatFunc,
    pub poles: Vec<DeltaPole>,
    pub unmatched_terms: Vec<usize>,
    pub constants_equal: bool,
    pub limit: Option<LimitCheck>,
}

impl DeltaCheck {
    pub fn ordering_ok(&self) -> bool {
        self.ordering == self.expected_ordering
    }

    pub fn constant(&self) -> Option<&RatFunc> {
        self.poles.first().and_then(|p| p.constant.as_ref())
    }

    pub fn passes(&self, limit_tol: f64) -> bool {
        self.ordering_ok()
            && self.unmatched_terms.is_empty()
            && self.poles.iter().all(|p| p.order == 1 && p.term.is_some())
            && self.constants_equal
            && self.limit.as_ref().is_some_and(|l| l.finite && l.drift <= limit_tol)
    }
}

/// Check `bracket X(u) Y(v) = Σ c_k delta(...) T_k(...)` of `alg` in `real`.
///
/// Each simple pole of the contraction factor contributes a delta function
/// whose coefficient is the residue times the zero-mode scalar; its support,
/// fused operator and coefficient are matched against the bracket terms up
/// to one common constant.
pub fn verify_delta_bracket(
    real: &Realization,
    alg: &AlgebraSpec,
    x: &str,
    y: &str,
) -> Result<DeltaCheck, VertexError> {
    let br = alg
        .bracket(x, y)
        .ok_or_else(|| VertexError::Unsupported(format!("{} has no bracket for {x}{y}", alg.name)))?;
    let (u, v) = (var_of(&br.left, "bracket")?, var_of(&br.right, "bracket")?);
    let a = real.vertex(x)?.renamed(u)?;
    let b = real.vertex(y)?.renamed(v)?;
    let c1 = real.contract(&a, &b)?;
    let c2 = real.contract(&b, &a)?;
    let ordering = ratio_of(&c1, &c2)?;
    let odd = alg.parity(x) == Some(Parity::Odd) && alg.parity(y) == Some(Parity::Odd);
    let expected_ordering = RatFunc::from_int(if odd { -1 } else { 1 });
    let Factor::Closed(factor) = &c1.factor else {
        return Err(VertexError::Unsupported("bracket needs a closed contraction factor".into()));
    };
    let scalar = scalar_ratfunc(&c1.scalar)?;

    let ratio_var = RatFunc::var(RATIO_VAR);
    let mut on_ratio = BTreeMap::new();
    on_ratio.insert(v.to_string(), &ratio_var * &RatFunc::var(u));
    let supports: Vec<RatFunc> = br
        .terms
        .iter()
        .map(|t| {
            if t.kind != DeltaKind::Multiplicative {
                return Err(VertexError::Unsupported("discrete realizations carry multiplicative deltas".into()));
            }
            Ok(t.support.to_ratfunc(&real.lets)?.substitute(&on_ratio)?)
        })
        .collect::<Result<_, VertexError>>()?;

    let mut poles = Vec::new();
    let mut used = vec![false; br.terms.len()];
    for p in factor.poles()? {
        let inner = &p.location * &RatFunc::var(u);
        let mut at_pole = BTreeMap::new();
        at_pole.insert(v.to_string(), inner.clone());
        let weight = &scalar.substitute(&at_pole)? * &p.coefficient;
        let fused = a.fuse(&b.at(&inner, u)?);
        let mut matched = None;
        let mut constant = None;
        let normalized = ratio_var.div(&p.location)?;
        for (k, t) in br.terms.iter().enumerate() {
            if used[k] || (supports[k] != normalized && supports[k] != normalized.inv()?) {
                continue;
            }
            let arg = t.current.arg.to_ratfunc(&real.lets)?.substitute(&at_pole)?;
            let target = real.vertex(&t.current.name)?.at(&arg, u)?;
            if !fused.same_operator(&target) {
                continue;
            }
            let offset = ZeroScalar::fold(&fused.constant.sub(&target.constant))?;
            let coef = t.coef.to_ratfunc(&real.lets)?.substitute(&at_pole)?;
            constant = Some((&weight * &scalar_ratfunc(&offset)?).div(&coef)?);
            matched = Some(k);
            used[k] = true;
            break;
        }
        poles.push(DeltaPole { location: p.location, order: p.order, weight, term: matched, fused, constant });
    }
    let unmatched_terms = (0..br.terms.len()).filter(|k| !used[*k]).collect();
    let first = poles.first().and_then(|p| p.constant.clone());
    let constants_equal = first.is_some() && poles.iter().all(|p| p.constant == first);
    let limit = limit_probe(real, &poles);
    Ok(DeltaCheck {
        left: x.to_string(),
        right: y.to_string(),
        ordering,
        expected_ordering,
        poles,
        unmatched_terms,
        constants_equal,
        limit,
    })
}

fn scalar_ratfunc(s: &ZeroScalar) -> Result<RatFunc, VertexError> {
    s.to_ratfunc()
        .ok_or_else(|| VertexError::Unsupported(format!("zero-mode scalar {s} is not rational")))
}

/// Values of the formal parameters that put `q` at the requested value,
/// when `q` is a pure power of a single formal parameter.
fn formal_point(real: &Realization, q: f64) -> Option<BTreeMap<String, Complex64>> {
    let mut point = BTreeMap::new();
    match real.lets.get("q") {
        None if real.formals.iter().any(|f| f == "q") => {
            point.insert("q".to_string(), Complex64::new(q, 0.0));
        }
        Some(rf) => {
            let (c, exps) = rf.as_monomial()?;
            if !c.is_one() || exps.len() != 1 {
                return None;
            }
            let (s, e) = exps.into_iter().next()?;
            point.insert(s, Complex64::new(q.powf(1.0 / e as f64), 0.0));
        }
        None => return None,
    }
    Some(point)
}

fn limit_probe(real: &Realization, poles: &[DeltaPole]) -> Option<LimitCheck> {
    let points: Vec<_> = LIMIT_POINTS.iter().map(|q| formal_point(real, *q)).collect::<Option<_>>()?;
    let eval = |f: &RatFunc, p: &BTreeMap<String, Complex64>| {
        f.eval(&|n| p.get(n).copied()).unwrap_or(Complex64::new(f64::NAN, 0.0))
    };
    let pair = |f: &RatFunc| [eval(f, &points[0]), eval(f, &points[1])];
    let constants: Vec<[Complex64; 2]> = poles.iter().filter_map(|p| p.constant.as_ref()).map(pair).collect();
    let locations: Vec<[Complex64; 2]> = poles.iter().map(|p| pair(&p.location)).collect();
    let finite = constants.iter().chain(&locations).flatten().all(|z| z.re.is_finite() && z.im.is_finite());
    let drift = constants.iter().map(|[a, b]| (a - b).norm()).fold(0.0, f64::max);
    Some(LimitCheck { q: LIMIT_POINTS, constants, locations, finite, drift })
}
