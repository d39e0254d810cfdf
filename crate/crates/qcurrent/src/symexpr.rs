//! Symbolic scalar expressions over complex parameters and spectral
//! variables, with principal-branch numerical evaluation.
//!
//! Only constant folding is performed on construction. Equality of two
//! expressions is decided elsewhere, either structurally or by randomized
//! numerical testing.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{rat, rat_to_f64, EvalFailure, ExactError, Point, Rat, RatFunc, NEAR_POLE};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Cosh,
    Sinh,
    Tanh,
    Csch,
    Cos,
    Sin,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Cosh => "cosh",
            Func::Sinh => "sinh",
            Func::Tanh => "tanh",
            Func::Csch => "csch",
            Func::Cos => "cos",
            Func::Sin => "sin",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "cosh" => Func::Cosh,
            "sinh" => Func::Sinh,
            "tanh" => Func::Tanh,
            "csch" => Func::Csch,
            "cos" => Func::Cos,
            "sin" => Func::Sin,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Const {
    I,
    Pi,
    EulerGamma,
}

impl Const {
    pub fn name(self) -> &'static str {
        match self {
            Const::I => "i",
            Const::Pi => "pi",
            Const::EulerGamma => "gammaE",
        }
    }

    pub fn value(self) -> Complex64 {
        match self {
            Const::I => Complex64::i(),
            Const::Pi => Complex64::new(std::f64::consts::PI, 0.0),
            Const::EulerGamma => Complex64::new(EULER_GAMMA, 0.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SymExpr {
    Num(Rat),
    Const(Const),
    Param(String),
    Var(String),
    Neg(Box<SymExpr>),
    Add(Box<SymExpr>, Box<SymExpr>),
    Sub(Box<SymExpr>, Box<SymExpr>),
    Mul(Box<SymExpr>, Box<SymExpr>),
    Div(Box<SymExpr>, Box<SymExpr>),
    Pow(Box<SymExpr>, Box<SymExpr>),
    Call(Func, Box<SymExpr>),
    /// Uninterpreted application, used for mode fields inside realizations.
    Apply(String, Box<SymExpr>),
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("near a pole (|denominator| = {0:e})")]
    NearPole(f64),
    #[error("cannot evaluate uninterpreted application `{0}`")]
    Uninterpreted(String),
}

impl From<EvalError> for EvalFailure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::NearPole(d) => EvalFailure::NearPole(d),
            other => EvalFailure::Other(other.to_string()),
        }
    }
}

/// Parameter values plus derived-parameter rules applied in order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamEnv {
    values: BTreeMap<String, Complex64>,
    rules: Vec<(String, SymExpr)>,
}

impl ParamEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, name: &str, value: impl Into<Complex64>) -> Self {
        self.values.insert(name.to_string(), value.into());
        self
    }

    pub fn insert(&mut self, name: &str, value: impl Into<Complex64>) {
        self.values.insert(name.to_string(), value.into());
    }

    /// Register a rule `name := expr`, evaluated against earlier values.
    pub fn derive(mut self, name: &str, expr: SymExpr) -> Self {
        self.rules.push((name.to_string(), expr));
        self
    }

    pub fn rules(&self) -> &[(String, SymExpr)] {
        &self.rules
    }

    /// Apply every derived rule, producing a flat value table.
    pub fn resolve(&self) -> Result<ParamEnv, EvalError> {
        let mut out = ParamEnv { values: self.values.clone(), rules: Vec::new() };
        let empty = Point::new();
        for (name, expr) in &self.rules {
            let v = expr.eval(&out, &empty)?;
            out.values.insert(name.clone(), v);
        }
        out.rules = self.rules.clone();
        Ok(out)
    }

    /// Take base values from a sample point, then apply `rules` in order.
    pub fn from_point(point: &Point, rules: &[(String, SymExpr)]) -> Result<ParamEnv, EvalError> {
        ParamEnv { values: point.clone(), rules: rules.to_vec() }.resolve()
    }

    pub fn get(&self, name: &str) -> Option<Complex64> {
        self.values.get(name).copied()
    }

    pub fn values(&self) -> &BTreeMap<String, Complex64> {
        &self.values
    }
}

fn boxed(e: SymExpr) -> Box<SymExpr> {
    Box::new(e)
}

impl SymExpr {
    pub fn num(n: i64) -> Self {
        SymExpr::Num(rat(n, 1))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        SymExpr::Num(rat(n, d))
    }

    pub fn param(name: &str) -> Self {
        SymExpr::Param(name.to_string())
    }

    pub fn var(name: &str) -> Self {
        SymExpr::Var(name.to_string())
    }

    pub fn i() -> Self {
        SymExpr::Const(Const::I)
    }

    pub fn pi() -> Self {
        SymExpr::Const(Const::Pi)
    }

    pub fn call(f: Func, arg: SymExpr) -> Self {
        SymExpr::Call(f, boxed(arg))
    }

    pub fn as_num(&self) -> Option<&Rat> {
        match self {
            SymExpr::Num(r) => Some(r),
            _ => None,
        }
    }

    // Folding constructors. These are what the parser uses, so that the
    // printed form of a parsed expression re-parses to the same tree.

    pub fn neg(a: SymExpr) -> SymExpr {
        match a {
            SymExpr::Num(r) => SymExpr::Num(-r),
            a => SymExpr::Neg(boxed(a)),
        }
    }

    pub fn add(a: SymExpr, b: SymExpr) -> SymExpr {
        match (a, b) {
            (SymExpr::Num(x), SymExpr::Num(y)) => SymExpr::Num(x + y),
            (a, b) => SymExpr::Add(boxed(a), boxed(b)),
        }
    }

    pub fn sub(a: SymExpr, b: SymExpr) -> SymExpr {
        match (a, b) {
            (SymExpr::Num(x), SymExpr::Num(y)) => SymExpr::Num(x - y),
            (a, b) => SymExpr::Sub(boxed(a), boxed(b)),
        }
    }

    pub fn mul(a: SymExpr, b: SymExpr) -> SymExpr {
        match (a, b) {
            (SymExpr::Num(x), SymExpr::Num(y)) => SymExpr::Num(x * y),
            (a, b) => SymExpr::Mul(boxed(a), boxed(b)),
        }
    }

    /// Division; folding is skipped when the divisor is the literal zero so
    /// that the error surfaces at evaluation time with a location.
    pub fn div(a: SymExpr, b: SymExpr) -> SymExpr {
        match (a, b) {
            (SymExpr::Num(x), SymExpr::Num(y)) if !y.is_zero() => SymExpr::Num(x / y),
            (a, b) => SymExpr::Div(boxed(a), boxed(b)),
        }
    }

    pub fn pow(a: SymExpr, b: SymExpr) -> SymExpr {
        match (a, b) {
            (SymExpr::Num(x), SymExpr::Num(y))
                if y.is_integer() && y.abs() <= rat(64, 1) && !(x.is_zero() && y.is_negative()) =>
            {
                let k = y.to_integer().to_i32().unwrap_or(0);
                SymExpr::Num(num_traits::pow::Pow::pow(x, k))
            }
            (a, b) => SymExpr::Pow(boxed(a), boxed(b)),
        }
    }

    /// Evaluate with principal branches for `ln`, `sqrt` and non-integer powers.
    pub fn eval(&self, env: &ParamEnv, vars: &Point) -> Result<Complex64, EvalError> {
        use SymExpr::*;
        Ok(match self {
            Num(r) => Complex64::new(rat_to_f64(r), 0.0),
            Const(c) => c.value(),
            Param(n) => env.get(n).ok_or_else(|| EvalError::Unbound(n.clone()))?,
            Var(n) => *vars.get(n).ok_or_else(|| EvalError::Unbound(n.clone()))?,
            Neg(a) => -a.eval(env, vars)?,
            Add(a, b) => a.eval(env, vars)? + b.eval(env, vars)?,
            Sub(a, b) => a.eval(env, vars)? - b.eval(env, vars)?,
            Mul(a, b) => a.eval(env, vars)? * b.eval(env, vars)?,
            Div(a, b) => {
                let d = b.eval(env, vars)?;
                if d.norm() < NEAR_POLE {
                    return Err(EvalError::NearPole(d.norm()));
                }
                a.eval(env, vars)? / d
            }
            Pow(a, b) => {
                let base = a.eval(env, vars)?;
                match b.as_num() {
                    Some(r) if r.is_integer() => {
                        let k = r.to_integer().to_i32().unwrap_or(i32::MAX);
                        if k < 0 && base.norm() < NEAR_POLE {
                            return Err(EvalError::NearPole(base.norm()));
                        }
                        base.powi(k)
                    }
                    _ => {
                        if base.norm() < NEAR_POLE {
                            return Err(EvalError::NearPole(base.norm()));
                        }
                        (b.eval(env, vars)? * base.ln()).exp()
                    }
                }
            }
            Call(f, a) => {
                let x = a.eval(env, vars)?;
                match f {
                    Func::Exp => x.exp(),
                    Func::Ln => {
                        if x.norm() < NEAR_POLE {
                            return Err(EvalError::NearPole(x.norm()));
                        }
                        x.ln()
                    }
                    Func::Sqrt => x.sqrt(),
                    Func::Cosh => x.cosh(),
                    Func::Sinh => x.sinh(),
                    Func::Tanh => x.tanh(),
                    Func::Csch => {
                        let s = x.sinh();
                        if s.norm() < NEAR_POLE {
                            return Err(EvalError::NearPole(s.norm()));
                        }
                        s.inv()
                    }
                    Func::Cos => x.cos(),
                    Func::Sin => x.sin(),
                }
            }
            Apply(n, _) => return Err(EvalError::Uninterpreted(n.clone())),
        })
    }

    /// Substitute variables and parameters by expressions.
    pub fn substitute(
        &self,
        vars: &BTreeMap<String, SymExpr>,
        params: &BTreeMap<String, SymExpr>,
    ) -> SymExpr {
        use SymExpr::*;
        let go = |e: &SymExpr| e.substitute(vars, params);
        match self {
            Var(n) => vars.get(n).cloned().unwrap_or_else(|| self.clone()),
            Param(n) => params.get(n).cloned().unwrap_or_else(|| self.clone()),
            Num(_) | Const(_) => self.clone(),
            Neg(a) => SymExpr::Neg(boxed(go(a))),
            Add(a, b) => SymExpr::Add(boxed(go(a)), boxed(go(b))),
            Sub(a, b) => SymExpr::Sub(boxed(go(a)), boxed(go(b))),
            Mul(a, b) => SymExpr::Mul(boxed(go(a)), boxed(go(b))),
            Div(a, b) => SymExpr::Div(boxed(go(a)), boxed(go(b))),
            Pow(a, b) => SymExpr::Pow(boxed(go(a)), boxed(go(b))),
            Call(f, a) => SymExpr::Call(*f, boxed(go(a))),
            Apply(n, a) => SymExpr::Apply(n.clone(), boxed(go(a))),
        }
    }

    /// Replace `var` by `var + delta`.
    pub fn shift(&self, var: &str, delta: SymExpr) -> SymExpr {
        let mut m = BTreeMap::new();
        m.insert(var.to_string(), SymExpr::Add(boxed(SymExpr::var(var)), boxed(delta)));
        self.substitute(&m, &BTreeMap::new())
    }

    /// Rename variables (no arithmetic), e.g. swap `u` and `v`.
    pub fn rename_vars(&self, map: &BTreeMap<String, String>) -> SymExpr {
        let vars = map.iter().map(|(k, v)| (k.clone(), SymExpr::var(v))).collect();
        self.substitute(&vars, &BTreeMap::new())
    }

    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let SymExpr::Var(n) = e {
                out.push(n.clone());
            }
        });
        out.sort();
        out.dedup();
        out
    }

    pub fn free_params(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let SymExpr::Param(n) = e {
                out.push(n.clone());
            }
        });
        out.sort();
        out.dedup();
        out
    }

    pub fn walk(&self, f: &mut dyn FnMut(&SymExpr)) {
        use SymExpr::*;
        f(self);
        match self {
            Num(_) | Const(_) | Param(_) | Var(_) => {}
            Neg(a) | Call(_, a) | Apply(_, a) => a.walk(f),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => {
                a.walk(f);
                b.walk(f);
            }
        }
    }

    pub(crate) fn prec(&self) -> u8 {
        use SymExpr::*;
        match self {
            Add(..) | Sub(..) => 1,
            Mul(..) | Div(..) => 2,
            Neg(..) => 3,
            Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({})", self)
        } else {
            write!(f, "{}", self)
        }
    }
}

/// Why an expression has no exact rational form.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConvertError {
    #[error("`{0}` has no exact rational form")]
    Transcendental(String),
    #[error("power `{0}` does not reduce to integer exponents")]
    Power(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Formal symbols used by [`SymExpr::to_ratfunc_ext`].
pub const FORMAL_I: &str = "%i";
pub const FORMAL_PI: &str = "%pi";

/// Formal symbol standing for `ln(var)`.
pub fn formal_log(var: &str) -> String {
    format!("%ln:{var}")
}

impl SymExpr {
    /// Exact conversion. Parameters found in `params` are replaced by their
    /// values; all other parameters and variables stay symbolic.
    pub fn to_ratfunc(&self, params: &BTreeMap<String, RatFunc>) -> Result<RatFunc, ConvertError> {
        self.convert(params, false)
    }

    /// Like [`SymExpr::to_ratfunc`] but with `i`, `pi` and `ln(monomial)`
    /// kept as formal symbols, for reading off linear forms in logarithms.
    pub fn to_ratfunc_ext(&self, params: &BTreeMap<String, RatFunc>) -> Result<RatFunc, ConvertError> {
        self.convert(params, true)
    }

    fn convert(&self, params: &BTreeMap<String, RatFunc>, ext: bool) -> Result<RatFunc, ConvertError> {
        use SymExpr::*;
        let go = |e: &SymExpr| e.convert(params, ext);
        Ok(match self {
            Num(r) => RatFunc::constant(r.clone()),
            Param(n) => params.get(n).cloned().unwrap_or_else(|| RatFunc::var(n)),
            Var(n) => RatFunc::var(n),
            Const(self::Const::I) if ext => RatFunc::var(FORMAL_I),
            Const(self::Const::Pi) if ext => RatFunc::var(FORMAL_PI),
            Const(_) => return Err(ConvertError::Transcendental(self.to_string())),
            Neg(a) => -&go(a)?,
            Add(a, b) => &go(a)? + &go(b)?,
            Sub(a, b) => &go(a)? - &go(b)?,
            Mul(a, b) => &go(a)? * &go(b)?,
            Div(a, b) => go(a)?.div(&go(b)?)?,
            Pow(a, b) => {
                let base = go(a)?;
                let Some(e) = b.as_num() else { return Err(ConvertError::Power(self.to_string())) };
                if e.is_integer() {
                    let k = e.to_integer().to_i64().ok_or_else(|| ConvertError::Power(self.to_string()))?;
                    base.powi(k)?
                } else {
                    root_of_monomial(&base, e).ok_or_else(|| ConvertError::Power(self.to_string()))?
                }
            }
            Call(Func::Ln, a) if ext => {
                let arg = go(a)?;
                let (c, exps) =
                    arg.as_monomial().ok_or_else(|| ConvertError::Transcendental(self.to_string()))?;
                let mut acc = RatFunc::zero();
                if c == -Rat::one() {
                    acc = &RatFunc::var(FORMAL_I) * &RatFunc::var(FORMAL_PI);
                } else if !c.is_one() {
                    return Err(ConvertError::Transcendental(self.to_string()));
                }
                for (v, e) in exps {
                    acc = &acc + &(&RatFunc::from_int(e) * &RatFunc::var(&formal_log(&v)));
                }
                acc
            }
            Call(..) | Apply(..) => return Err(ConvertError::Transcendental(self.to_string())),
        })
    }
}

/// `base^e` for rational `e` when `base` is a monomial with unit coefficient
/// and every exponent times `e` is an integer.
fn root_of_monomial(base: &RatFunc, e: &Rat) -> Option<RatFunc> {
    let (c, exps) = base.as_monomial()?;
    if !c.is_one() {
        return None;
    }
    let mut out = BTreeMap::new();
    for (v, k) in exps {
        let x = Rat::from_integer(k.into()) * e;
        if !x.is_integer() {
            return None;
        }
        out.insert(v, x.to_integer().to_i64()?);
    }
    Some(RatFunc::monomial(Rat::one(), &out))
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SymExpr::*;
        match self {
            Num(r) => {
                if r.is_integer() && !r.is_negative() {
                    write!(f, "{}", r)
                } else {
                    write!(f, "({})", r)
                }
            }
            Const(c) => write!(f, "{}", c.name()),
            Param(n) | Var(n) => write!(f, "{}", n),
            Neg(a) => {
                write!(f, "-")?;
                a.fmt_child(f, matches!(**a, Neg(_) | Add(..) | Sub(..) | Mul(..) | Div(..)))
            }
            Add(a, b) | Sub(a, b) => {
                a.fmt_child(f, a.prec() < 1)?;
                write!(f, "{}", if matches!(self, Add(..)) { " + " } else { " - " })?;
                b.fmt_child(f, b.prec() <= 1 || matches!(**b, Neg(_)))
            }
            Mul(a, b) | Div(a, b) => {
                a.fmt_child(f, a.prec() < 2)?;
                write!(f, "{}", if matches!(self, Mul(..)) { "*" } else { "/" })?;
                b.fmt_child(f, b.prec() <= 2 || matches!(**b, Neg(_)))
            }
            Pow(a, b) => {
                a.fmt_child(f, a.prec() <= 4)?;
                write!(f, "^")?;
                b.fmt_child(f, b.prec() < 5)
            }
            Call(func, a) => write!(f, "{}({})", func.name(), a),
            Apply(n, a) => write!(f, "{}({})", n, a),
        }
    }
}

impl From<Rat> for SymExpr {
    fn from(r: Rat) -> Self {
        SymExpr::Num(r)
    }
}
