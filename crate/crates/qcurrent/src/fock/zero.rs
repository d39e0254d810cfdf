use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{rat_to_f64, Rat, RatFunc};
use crate::symexpr::{formal_log, FORMAL_I, FORMAL_PI};

/// Transcendental directions a zero-mode coefficient may point in.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogBasis {
    One,
    /// `i * pi`
    IPi,
    /// `ln(var)`
    Log(String),
}

/// A linear combination of `1`, `i*pi` and `ln(var)` with rational-function
/// coefficients, e.g. `-(ln z + i*pi/2)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZeroCoef(BTreeMap<LogBasis, RatFunc>);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ZeroError {
    #[error("exponent is not linear in logarithms: {0}")]
    Nonlinear(String),
    #[error("scalar `{0}` cannot be folded into a monomial and a phase")]
    NotFoldable(String),
}

impl ZeroCoef {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: RatFunc) -> Self {
        Self::term(LogBasis::One, c)
    }

    pub fn term(b: LogBasis, c: RatFunc) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(b, c);
        }
        ZeroCoef(m)
    }

    pub fn log(var: &str) -> Self {
        Self::term(LogBasis::Log(var.to_string()), RatFunc::one())
    }

    pub fn i_pi() -> Self {
        Self::term(LogBasis::IPi, RatFunc::one())
    }

    pub fn terms(&self) -> &BTreeMap<LogBasis, RatFunc> {
        &self.0
    }

    pub fn get(&self, b: &LogBasis) -> RatFunc {
        self.0.get(b).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The coefficient when only the `1` direction is present.
    pub fn as_ratfunc(&self) -> Option<RatFunc> {
        match self.0.len() {
            0 => Some(RatFunc::zero()),
            1 => self.0.get(&LogBasis::One).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &ZeroCoef) -> ZeroCoef {
        let mut out = self.0.clone();
        for (b, c) in &other.0 {
            let v = match out.get(b) {
                Some(a) => a + c,
                None => c.clone(),
            };
            if v.is_zero() {
                out.remove(b);
            } else {
                out.insert(b.clone(), v);
            }
        }
        ZeroCoef(out)
    }

    pub fn neg(&self) -> ZeroCoef {
        ZeroCoef(self.0.iter().map(|(b, c)| (b.clone(), -c)).collect())
    }

    pub fn sub(&self, other: &ZeroCoef) -> ZeroCoef {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &RatFunc) -> ZeroCoef {
        if k.is_zero() {
            return ZeroCoef::zero();
        }
        ZeroCoef(self.0.iter().map(|(b, c)| (b.clone(), c * k)).collect())
    }

    /// Product, defined when one factor lies along `1` only.
    pub fn mul(&self, other: &ZeroCoef) -> Result<ZeroCoef, ZeroError> {
        if let Some(k) = other.as_ratfunc() {
            Ok(self.scale(&k))
        } else if let Some(k) = self.as_ratfunc() {
            Ok(other.scale(&k))
        } else {
            Err(ZeroError::Nonlinear(format!("({self})*({other})")))
        }
    }

    /// Rename the variables inside logarithms and coefficients.
    pub fn rename(&self, map: &BTreeMap<String, RatFunc>, logs: &BTreeMap<String, ZeroCoef>) -> ZeroCoef {
        let mut out = ZeroCoef::zero();
        for (b, c) in &self.0 {
            let c = c.substitute(map).expect("renaming keeps denominators nonzero");
            let dir = match b {
                LogBasis::Log(v) => match logs.get(v) {
                    Some(expansion) => expansion.scale(&c),
                    None => ZeroCoef::term(b.clone(), c),
                },
                _ => ZeroCoef::term(b.clone(), c),
            };
            out = out.add(&dir);
        }
        out
    }

    /// Read a rational function in the formal symbols produced by
    /// [`SymExpr::to_ratfunc_ext`](crate::symexpr::SymExpr::to_ratfunc_ext).
    pub fn from_formal(f: &RatFunc) -> Result<ZeroCoef, ZeroError> {
        let formal = |v: &str| v.starts_with('%');
        if f.denom().vars().iter().any(|v| formal(v)) {
            return Err(ZeroError::Nonlinear(f.to_string()));
        }
        let den = RatFunc::from_poly(f.denom().clone());
        let mut out = ZeroCoef::zero();
        for (mono, c) in f.numer().terms() {
            let (mut i_pow, mut pi_pow) = (0u32, 0u32);
            let mut logs = Vec::new();
            let mut rest = BTreeMap::new();
            for (v, e) in mono.factors() {
                if v == FORMAL_I {
                    i_pow = *e;
                } else if v == FORMAL_PI {
                    pi_pow = *e;
                } else if let Some(name) = v.strip_prefix("%ln:") {
                    logs.push((name.to_string(), *e));
                } else {
                    rest.insert(v.clone(), *e as i64);
                }
            }
            let mut coef = c.clone();
            if i_pow >= 2 {
                if (i_pow / 2) % 2 == 1 {
                    coef = -coef;
                }
                i_pow %= 2;
            }
            let basis = match (i_pow, pi_pow, logs.as_slice()) {
                (0, 0, []) => LogBasis::One,
                (1, 1, []) => LogBasis::IPi,
                (0, 0, [(v, 1)]) => LogBasis::Log(v.clone()),
                _ => return Err(ZeroError::Nonlinear(f.to_string())),
            };
            let k = RatFunc::monomial(coef, &rest).div(&den).expect("denominator is nonzero");
            out = out.add(&ZeroCoef::term(basis, k));
        }
        Ok(out)
    }

    /// Back to a formal rational function, inverse of [`ZeroCoef::from_formal`].
    pub fn to_formal(&self) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (b, c) in &self.0 {
            let dir = match b {
                LogBasis::One => RatFunc::one(),
                LogBasis::IPi => &RatFunc::var(FORMAL_I) * &RatFunc::var(FORMAL_PI),
                LogBasis::Log(v) => RatFunc::var(&formal_log(v)),
            };
            acc = &acc + &(&dir * c);
        }
        acc
    }

    /// Numeric value with `ln` taken on the principal branch.
    pub fn eval(&self, point: &dyn Fn(&str) -> Option<Complex64>) -> Option<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, c) in &self.0 {
            let k = c.eval(point)?;
            let dir = match b {
                LogBasis::One => Complex64::new(1.0, 0.0),
                LogBasis::IPi => Complex64::new(0.0, std::f64::consts::PI),
                LogBasis::Log(v) => point(v)?.ln(),
            };
            acc += k * dir;
        }
        Some(acc)
    }
}

impl fmt::Display for ZeroCoef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match b {
                LogBasis::One => write!(f, "{c}")?,
                LogBasis::IPi => write!(f, "({c})*i*pi")?,
                LogBasis::Log(v) => write!(f, "({c})*ln({v})")?,
            }
        }
        Ok(())
    }
}

/// A zero-mode exponent `Σ p_k P_k + Σ q_k Q_k`; normal ordering puts
/// every `Q` to the left of every `P`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZeroExponent {
    pub p: BTreeMap<String, ZeroCoef>,
    pub q: BTreeMap<String, RatFunc>,
}

impl ZeroExponent {
    pub fn is_zero(&self) -> bool {
        self.p.is_empty() && self.q.is_empty()
    }

    pub fn add(&self, other: &ZeroExponent) -> ZeroExponent {
        let mut out = self.clone();
        for (k, c) in &other.p {
            let v = out.p.get(k).map(|a| a.add(c)).unwrap_or_else(|| c.clone());
            if v.is_zero() {
                out.p.remove(k);
            } else {
                out.p.insert(k.clone(), v);
            }
        }
        for (k, c) in &other.q {
            let v = out.q.get(k).map(|a| a + c).unwrap_or_else(|| c.clone());
            if v.is_zero() {
                out.q.remove(k);
            } else {
                out.q.insert(k.clone(), v);
            }
        }
        out
    }
}

/// `[A, B]` for zero-mode exponents whose pairs satisfy `[P, Q] = 1`.
///
/// `e^A e^B = e^{[A,B]} e^B e^A`, and `[A, B]` is central.
pub fn zero_mode_commutator(
    a: &ZeroExponent,
    b: &ZeroExponent,
    pairs: &[(String, String)],
) -> Result<ZeroCoef, ZeroError> {
    let mut acc = ZeroCoef::zero();
    for (pn, qn) in pairs {
        if let (Some(pa), Some(qb)) = (a.p.get(pn), b.q.get(qn)) {
            acc = acc.add(&pa.scale(qb));
        }
        if let (Some(qa), Some(pb)) = (a.q.get(qn), b.p.get(pn)) {
            acc = acc.sub(&pb.scale(qa));
        }
    }
    Ok(acc)
}

/// Reorder `e^A e^B` into `e^B e^A`, returning the scalar `e^{[A,B]}` in folded form.
pub fn zero_mode_reorder(
    a: &ZeroExponent,
    b: &ZeroExponent,
    pairs: &[(String, String)],
) -> Result<ZeroScalar, ZeroError> {
    ZeroScalar::fold(&zero_mode_commutator(a, b, pairs)?)
}

/// `e^{c}` for a constant-coefficient [`ZeroCoef`]: a monomial `Π v^{e_v}`,
/// a phase `e^{i pi t}` and a leftover `e^{r}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZeroScalar {
    pub monomial: BTreeMap<String, Rat>,
    pub turns: Rat,
    pub exp_rest: Rat,
}

impl ZeroScalar {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn fold(c: &ZeroCoef) -> Result<ZeroScalar, ZeroError> {
        let mut out = ZeroScalar::one();
        for (b, k) in c.terms() {
            let k = k.as_constant().ok_or_else(|| ZeroError::NotFoldable(c.to_string()))?;
            match b {
                LogBasis::One => out.exp_rest = k,
                LogBasis::IPi => out.turns = k,
                LogBasis::Log(v) => {
                    out.monomial.insert(v.clone(), k);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &ZeroScalar) -> ZeroScalar {
        let mut m = self.monomial.clone();
        for (v, e) in &other.monomial {
            let s = m.get(v).cloned().unwrap_or_else(Rat::zero) + e;
            if s.is_zero() {
                m.remove(v);
            } else {
                m.insert(v.clone(), s);
            }
        }
        ZeroScalar { monomial: m, turns: &self.turns + &other.turns, exp_rest: &self.exp_rest + &other.exp_rest }
    }

    pub fn inv(&self) -> ZeroScalar {
        ZeroScalar {
            monomial: self.monomial.iter().map(|(v, e)| (v.clone(), -e)).collect(),
            turns: -self.turns.clone(),
            exp_rest: -self.exp_rest.clone(),
        }
    }

    /// The phase as an exact sign when `turns` is an integer.
    pub fn sign(&self) -> Option<i8> {
        if !self.turns.is_integer() {
            return None;
        }
        let odd = (self.turns.to_integer() % 2u8).abs().is_one();
        Some(if odd { -1 } else { 1 })
    }

    /// `± Π v^e` exactly, when the exponents and phase allow it.
    pub fn to_ratfunc(&self) -> Option<RatFunc> {
        if !self.exp_rest.is_zero() {
            return None;
        }
        let sign = self.sign()?;
        let mut exps = BTreeMap::new();
        for (v, e) in &self.monomial {
            if !e.is_integer() {
                return None;
            }
            exps.insert(v.clone(), e.to_integer().to_i64()?);
        }
        Some(RatFunc::monomial(Rat::from_integer(sign.into()), &exps))
    }

    pub fn eval(&self, point: &dyn Fn(&str) -> Option<Complex64>) -> Option<Complex64> {
        let mut acc = Complex64::from_polar(rat_to_f64(&self.exp_rest).exp(), std::f64::consts::PI * rat_to_f64(&self.turns));
        for (v, e) in &self.monomial {
            acc *= (point(v)?.ln() * rat_to_f64(e)).exp();
        }
        Some(acc)
    }
}

impl fmt::Display for ZeroScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.exp_rest.is_zero() {
            parts.push(format!("exp({})", self.exp_rest));
        }
        if !self.turns.is_zero() {
            parts.push(format!("exp(i*pi*{})", self.turns));
        }
        for (v, e) in &self.monomial {
            parts.push(format!("{v}^({e})"));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}
