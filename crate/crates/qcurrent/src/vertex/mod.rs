//! Normal-ordered exponentials of free bosons and their contractions.

mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::One;

use crate::dsl::{RealizationSpec, VertexBody};
use crate::exact::{ExactError, GeomBracket, LinearFactors, Rat, RatFunc, TruncSeries};
use crate::fock::{zero_mode_commutator, DiscreteModes, ModeError, ZeroCoef, ZeroError, ZeroExponent, ZeroScalar};
use crate::symexpr::{ConvertError, SymExpr};

pub use verify::{
    verify_delta_bracket, verify_exchange, DeltaCheck, DeltaPole, ExchangeCheck, LimitCheck, ORDER_LIMIT,
};

/// Variable standing for the ratio `inner/outer` in contraction factors.
pub const RATIO_VAR: &str = "x";

#[derive(Debug, thiserror::Error)]
pub enum VertexError {
    #[error(transparent)]
    Convert(#[from] ConvertError),
    #[error(transparent)]
    Zero(#[from] ZeroError),
    #[error(transparent)]
    Modes(#[from] ModeError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("exponent is not linear in the mode fields: {0}")]
    Nonlinear(String),
    #[error("mode field `{family}` is applied at `{arg}`, not at a multiple of `{var}`")]
    BadArgument { family: String, arg: String, var: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("contraction of {0} is only known as a series to order {1}")]
    SeriesOnly(String, usize),
    #[error("{0}")]
    Unsupported(String),
}

/// `coef * f(multiplier * var)` for a mode field `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OscTerm {
    pub family: String,
    pub coef: RatFunc,
    pub multiplier: RatFunc,
}

/// `:exp(constant + Σ osc + zero):` in the variable `var`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOp {
    pub label: String,
    pub var: String,
    pub constant: ZeroCoef,
    pub osc: Vec<OscTerm>,
    pub zero: ZeroExponent,
}

impl VertexOp {
    pub fn identity(var: &str) -> Self {
        VertexOp {
            label: "1".into(),
            var: var.to_string(),
            constant: ZeroCoef::zero(),
            osc: Vec::new(),
            zero: ZeroExponent::default(),
        }
    }

    fn push_osc(&mut self, t: OscTerm) {
        if t.coef.is_zero() {
            return;
        }
        match self.osc.iter_mut().find(|o| o.family == t.family && o.multiplier == t.multiplier) {
            Some(o) => o.coef = &o.coef + &t.coef,
            None => self.osc.push(t),
        }
        self.osc.retain(|o| !o.coef.is_zero());
    }

    /// The operator evaluated at `arg`, re-expressed in the variable `var`.
    /// `arg` must be a monomial multiple of `var`.
    pub fn at(&self, arg: &RatFunc, var: &str) -> Result<VertexOp, VertexError> {
        let mut sub = BTreeMap::new();
        sub.insert(self.var.clone(), arg.clone());
        let mut logs = BTreeMap::new();
        logs.insert(self.var.clone(), log_of(arg)?);
        let ratio = arg.div(&RatFunc::var(var))?;
        if ratio.depends_on(var) {
            return Err(VertexError::BadArgument { family: self.label.clone(), arg: arg.to_string(), var: var.into() });
        }
        let mut out = VertexOp::identity(var);
        out.label = self.label.clone();
        out.constant = self.constant.rename(&sub, &logs);
        for t in &self.osc {
            out.push_osc(OscTerm {
                family: t.family.clone(),
                coef: t.coef.substitute(&sub)?,
                multiplier: &t.multiplier * &ratio,
            });
        }
        for (k, c) in &self.zero.p {
            out.zero.p.insert(k.clone(), c.rename(&sub, &logs));
        }
        for (k, c) in &self.zero.q {
            out.zero.q.insert(k.clone(), c.substitute(&sub)?);
        }
        Ok(out)
    }

    /// The same operator in a fresh variable.
    pub fn renamed(&self, var: &str) -> Result<VertexOp, VertexError> {
        self.at(&RatFunc::var(var), var)
    }

    /// `:self other:` for operators in the same variable.
    pub fn fuse(&self, other: &VertexOp) -> VertexOp {
        assert_eq!(self.var, other.var, "fused operators share a variable");
        let mut out = self.clone();
        out.label = format!("{}{}", self.label, other.label);
        out.constant = out.constant.add(&other.constant);
        for t in &other.osc {
            out.push_osc(t.clone());
        }
        out.zero = out.zero.add(&other.zero);
        out
    }

    /// Equal up to the scalar constant in the exponent.
    pub fn same_operator(&self, other: &VertexOp) -> bool {
        let key = |v: &VertexOp| {
            let mut o: Vec<(String, String, String)> =
                v.osc.iter().map(|t| (t.family.clone(), t.multiplier.to_string(), t.coef.to_string())).collect();
            o.sort();
            o
        };
        self.var == other.var && key(self) == key(other) && self.zero == other.zero
    }
}

impl fmt::Display for VertexOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) = :exp(", self.label, self.var)?;
        let mut parts = Vec::new();
        for t in &self.osc {
            parts.push(format!("({})*{}(({})*{})", t.coef, t.family, t.multiplier, self.var));
        }
        for (k, c) in &self.zero.p {
            parts.push(format!("({c})*{k}"));
        }
        for (k, c) in &self.zero.q {
            parts.push(format!("({c})*{k}"));
        }
        if !self.constant.is_zero() {
            parts.push(self.constant.to_string());
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}):", parts.join(" + "))
    }
}

/// `ln(arg)` for a monomial argument with coefficient `±1`.
pub fn log_of(arg: &RatFunc) -> Result<ZeroCoef, VertexError> {
    let (c, exps) = arg
        .as_monomial()
        .ok_or_else(|| VertexError::Unsupported(format!("logarithm of non-monomial {arg}")))?;
    let mut out = ZeroCoef::zero();
    if c == -Rat::one() {
        out = ZeroCoef::i_pi();
    } else if !c.is_one() {
        return Err(VertexError::Unsupported(format!("logarithm of constant {c}")));
    }
    for (v, e) in exps {
        out = out.add(&ZeroCoef::log(&v).scale(&RatFunc::from_int(e)));
    }
    Ok(out)
}

/// Contraction factor of two operators.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    Closed(LinearFactors),
    /// Non-integer weights; only a truncated series in `RATIO_VAR` is available.
    Series(TruncSeries),
}

/// `A(z) B(w) = scalar * factor(w/z) :A(z) B(w):` for `|w/z| < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionResult {
    pub outer: String,
    pub inner: String,
    pub scalar: ZeroScalar,
    pub factor: Factor,
}

impl ContractionResult {
    /// Closed form as a rational function of the two variables, with sign.
    pub fn to_ratfunc(&self) -> Result<RatFunc, VertexError> {
        let f = match &self.factor {
            Factor::Closed(f) => f,
            Factor::Series(s) => {
                return Err(VertexError::SeriesOnly(format!("{}({}) {}", self.outer, self.inner, s.var()), s.order()))
            }
        };
        let s = self
            .scalar
            .to_ratfunc()
            .ok_or_else(|| VertexError::Unsupported(format!("zero-mode scalar {} is not rational", self.scalar)))?;
        let mut sub = BTreeMap::new();
        sub.insert(RATIO_VAR.to_string(), RatFunc::var(&self.inner).div(&RatFunc::var(&self.outer))?);
        Ok(&s * &f.to_ratfunc(RATIO_VAR)?.substitute(&sub)?)
    }
}

/// A discrete free-boson realization: mode tables plus named vertices.
#[derive(Clone, Debug)]
pub struct Realization {
    pub name: String,
    pub target: String,
    pub formals: Vec<String>,
    /// Target parameters as rational functions of the formal parameters.
    pub lets: BTreeMap<String, RatFunc>,
    pub modes: DiscreteModes,
    pub vertices: BTreeMap<String, VertexOp>,
    /// Truncation order for contractions without a closed product form.
    pub series_order: usize,
}

impl Realization {
    pub fn from_spec(spec: &RealizationSpec) -> Result<Realization, VertexError> {
        let mut lets = BTreeMap::new();
        for (n, e) in &spec.lets {
            let v = e.to_ratfunc(&lets)?;
            lets.insert(n.clone(), v);
        }
        let mut modes = DiscreteModes::new();
        for m in &spec.modes {
            modes = modes.family(m);
        }
        for (p, q) in &spec.zeros {
            modes = modes.zero_pair(p, q);
        }
        for b in &spec.brackets {
            let mut terms = Vec::new();
            for (w, r) in &b.terms {
                let w = w
                    .to_ratfunc(&lets)?
                    .as_constant()
                    .ok_or_else(|| VertexError::Unsupported(format!("weight {w} is not a number")))?;
                terms.push((w, r.to_ratfunc(&lets)?));
            }
            modes.insert_bracket(&b.left, &b.right, GeomBracket::new(terms));
        }
        let ctx = LinContext {
            lets: &lets,
            ps: spec.zeros.iter().map(|(p, _)| p.clone()).collect(),
            qs: spec.zeros.iter().map(|(_, q)| q.clone()).collect(),
            modes: spec.modes.iter().cloned().collect(),
        };
        let mut vertices: BTreeMap<String, VertexOp> = BTreeMap::new();
        for v in &spec.vertices {
            let op = match &v.body {
                VertexBody::Exponent(e) => {
                    let lin = ctx.linearize(e, &v.var)?;
                    VertexOp { label: v.name.clone(), var: v.var.clone(), constant: lin.scalar, osc: lin.osc, zero: lin.zero }
                }
                VertexBody::Fused(parts) => {
                    let mut acc = VertexOp::identity(&v.var);
                    for part in parts {
                        let base = vertices.get(&part.name).ok_or_else(|| VertexError::UnknownVertex(part.name.clone()))?;
                        let arg = part.arg.to_ratfunc(&lets)?;
                        acc = acc.fuse(&base.at(&arg, &v.var)?);
                    }
                    acc.label = v.name.clone();
                    acc
                }
            };
            vertices.insert(v.name.clone(), op);
        }
        Ok(Realization {
            name: spec.name.clone(),
            target: spec.target.clone(),
            formals: spec.formals.clone(),
            lets,
            modes,
            vertices,
            series_order: ORDER_LIMIT,
        })
    }

    pub fn with_series_order(mut self, order: usize) -> Self {
        self.series_order = order;
        self
    }

    pub fn vertex(&self, name: &str) -> Result<&VertexOp, VertexError> {
        self.vertices.get(name).ok_or_else(|| VertexError::UnknownVertex(name.to_string()))
    }

    /// `A(outer) B(inner) = scalar * factor(inner/outer) :A B:`.
    pub fn contract(&self, a: &VertexOp, b: &VertexOp) -> Result<ContractionResult, VertexError> {
        if a.var == b.var {
            return Err(VertexError::Unsupported("contracted operators need distinct variables".into()));
        }
        let annihilating = ZeroExponent { p: a.zero.p.clone(), q: BTreeMap::new() };
        let creating = ZeroExponent { p: BTreeMap::new(), q: b.zero.q.clone() };
        let scalar = ZeroScalar::fold(&zero_mode_commutator(&annihilating, &creating, self.modes.zero_pairs())?)?;
        let geom = self.contraction_bracket(a, b)?;
        let factor = match geom.closed_form() {
            Some(f) => Factor::Closed(f),
            None => Factor::Series(geom.contraction_series(RATIO_VAR, self.series_order)?),
        };
        Ok(ContractionResult { outer: a.var.clone(), inner: b.var.clone(), scalar, factor })
    }

    /// The oscillator part of `contract(a, b)` as a geometric-sum bracket in `inner/outer`.
    pub fn contraction_bracket(&self, a: &VertexOp, b: &VertexOp) -> Result<GeomBracket, VertexError> {
        let mut terms = Vec::new();
        for t1 in &a.osc {
            for t2 in &b.osc {
                let k = (&t1.coef * &t2.coef)
                    .as_constant()
                    .ok_or_else(|| VertexError::Unsupported("oscillator coefficients must be numbers".into()))?;
                let rho = t2.multiplier.div(&t1.multiplier)?;
                for (alpha, r) in self.modes.geom(&t1.family, &t2.family)?.terms() {
                    terms.push((&k * alpha, r * &rho));
                }
            }
        }
        Ok(GeomBracket::new(terms))
    }
}

struct LinContext<'a> {
    lets: &'a BTreeMap<String, RatFunc>,
    ps: BTreeSet<String>,
    qs: BTreeSet<String>,
    modes: BTreeSet<String>,
}

#[derive(Default)]
struct LinForm {
    scalar: ZeroCoef,
    osc: Vec<OscTerm>,
    zero: ZeroExponent,
}

impl LinForm {
    fn is_scalar(&self) -> bool {
        self.osc.is_empty() && self.zero.is_zero()
    }

    fn add(mut self, other: LinForm) -> LinForm {
        self.scalar = self.scalar.add(&other.scalar);
        self.osc.extend(other.osc);
        self.zero = self.zero.add(&other.zero);
        self
    }

    fn scale(self, s: &ZeroCoef) -> Result<LinForm, VertexError> {
        let nonlinear = || VertexError::Nonlinear(format!("operator times {s}"));
        let mut out = LinForm { scalar: self.scalar.mul(s)?, ..Default::default() };
        if !(self.osc.is_empty() && self.zero.q.is_empty()) {
            let k = s.as_ratfunc().ok_or_else(nonlinear)?;
            for t in self.osc {
                out.osc.push(OscTerm { coef: &t.coef * &k, ..t });
            }
            for (n, c) in self.zero.q {
                out.zero.q.insert(n, &c * &k);
            }
        }
        for (n, c) in self.zero.p {
            out.zero.p.insert(n, c.mul(s)?);
        }
        Ok(out)
    }
}

impl LinContext<'_> {
    fn has_operator(&self, e: &SymExpr) -> bool {
        let mut found = false;
        e.walk(&mut |x| match x {
            SymExpr::Apply(..) => found = true,
            SymExpr::Param(n) if self.ps.contains(n) || self.qs.contains(n) => found = true,
            _ => {}
        });
        found
    }

    fn linearize(&self, e: &SymExpr, var: &str) -> Result<LinForm, VertexError> {
        use SymExpr::*;
        if !self.has_operator(e) {
            let f = e.to_ratfunc_ext(self.lets)?;
            return Ok(LinForm { scalar: ZeroCoef::from_formal(&f)?, ..Default::default() });
        }
        match e {
            Neg(a) => self.linearize(a, var)?.scale(&ZeroCoef::constant(RatFunc::from_int(-1))),
            Add(a, b) => Ok(self.linearize(a, var)?.add(self.linearize(b, var)?)),
            Sub(a, b) => Ok(self
                .linearize(a, var)?
                .add(self.linearize(b, var)?.scale(&ZeroCoef::constant(RatFunc::from_int(-1)))?)),
            Mul(a, b) => {
                let (la, lb) = (self.linearize(a, var)?, self.linearize(b, var)?);
                if la.is_scalar() {
                    lb.scale(&la.scalar)
                } else if lb.is_scalar() {
                    la.scale(&lb.scalar)
                } else {
                    Err(VertexError::Nonlinear(e.to_string()))
                }
            }
            Div(a, b) => {
                let lb = self.linearize(b, var)?;
                let k = lb
                    .scalar
                    .as_ratfunc()
                    .filter(|_| lb.is_scalar())
                    .ok_or_else(|| VertexError::Nonlinear(e.to_string()))?;
                self.linearize(a, var)?.scale(&ZeroCoef::constant(k.inv()?))
            }
            Apply(m, arg) if self.modes.contains(m) => {
                let arg = arg.to_ratfunc(self.lets)?;
                let mult = arg.div(&RatFunc::var(var))?;
                if mult.depends_on(var) {
                    return Err(VertexError::BadArgument { family: m.clone(), arg: arg.to_string(), var: var.into() });
                }
                Ok(LinForm {
                    osc: vec![OscTerm { family: m.clone(), coef: RatFunc::one(), multiplier: mult }],
                    ..Default::default()
                })
            }
            Param(n) if self.ps.contains(n) => {
                let mut lf = LinForm::default();
                lf.zero.p.insert(n.clone(), ZeroCoef::constant(RatFunc::one()));
                Ok(lf)
            }
            Param(n) if self.qs.contains(n) => {
                let mut lf = LinForm::default();
                lf.zero.q.insert(n.clone(), RatFunc::one());
                Ok(lf)
            }
            _ => Err(VertexError::Nonlinear(e.to_string())),
        }
    }
}
