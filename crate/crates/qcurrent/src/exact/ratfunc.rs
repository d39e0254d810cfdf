//! Multivariate rational functions in canonical reduced form.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::poly::{Mono, Poly};
use super::{ExactError, Rat};

/// A quotient `num / den` with `gcd(num, den) = 1` and a monic denominator.
///
/// Because the representation is canonical, structural equality is
/// mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rat::one);
        let inv = lc.recip();
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc { num: Poly::from_int(n), den: Poly::one() }
    }

    pub fn var(name: &str) -> Self {
        RatFunc { num: Poly::var(name), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// `name^exp` for any integer exponent.
    pub fn var_pow(name: &str, exp: i64) -> Self {
        let m = Poly::monomial(Rat::one(), Mono::var(name, exp.unsigned_abs() as u32));
        if exp >= 0 {
            Self::from_poly(m)
        } else {
            RatFunc { num: Poly::one(), den: m }
        }
    }

    /// `c * Π v^e` with integer exponents of either sign.
    pub fn monomial(c: Rat, exps: &BTreeMap<String, i64>) -> Self {
        let mut acc = RatFunc::constant(c);
        for (v, e) in exps {
            acc = &acc * &RatFunc::var_pow(v, *e);
        }
        acc
    }

    /// The coefficient and exponents when `self` is a single monomial.
    pub fn as_monomial(&self) -> Option<(Rat, BTreeMap<String, i64>)> {
        if self.num.num_terms() != 1 || self.den.num_terms() != 1 {
            return None;
        }
        let (nm, nc) = self.num.terms().next()?;
        let (dm, dc) = self.den.terms().next()?;
        let mut exps = BTreeMap::new();
        for (v, e) in nm.factors() {
            *exps.entry(v.clone()).or_insert(0) += *e as i64;
        }
        for (v, e) in dm.factors() {
            *exps.entry(v.clone()).or_insert(0) -= *e as i64;
        }
        exps.retain(|_, e| *e != 0);
        Some((nc / dc, exps))
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num == self.den
    }

    pub fn as_constant(&self) -> Option<Rat> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn vars(&self) -> Vec<String> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v.sort();
        v.dedup();
        v
    }

    pub fn depends_on(&self, var: &str) -> bool {
        self.num.degree_in(var) > 0 || self.den.degree_in(var) > 0
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn powi(&self, n: i64) -> Result<Self, ExactError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let k = n.unsigned_abs() as u32;
        Ok(RatFunc { num: base.num.pow(k), den: base.den.pow(k) }.renormalised())
    }

    fn renormalised(self) -> Self {
        Self::reduce(self.num, self.den)
    }

    pub fn div(&self, other: &RatFunc) -> Result<Self, ExactError> {
        Ok(self * &other.inv()?)
    }

    /// Substitute variables by rational functions.
    pub fn substitute(&self, map: &BTreeMap<String, RatFunc>) -> Result<RatFunc, ExactError> {
        let n = subst_poly(&self.num, map)?;
        let d = subst_poly(&self.den, map)?;
        n.div(&d)
    }

    /// Numerical evaluation; `None` if a variable is unbound.
    pub fn eval(&self, point: &dyn Fn(&str) -> Option<Complex64>) -> Option<Complex64> {
        Some(self.num.eval(point)? / self.den.eval(point)?)
    }

    /// Numerical evaluation that also reports the denominator magnitude.
    pub fn eval_checked(
        &self,
        point: &dyn Fn(&str) -> Option<Complex64>,
    ) -> Option<(Complex64, f64)> {
        let d = self.den.eval(point)?;
        Some((self.num.eval(point)? / d, d.norm()))
    }
}

fn subst_poly(p: &Poly, map: &BTreeMap<String, RatFunc>) -> Result<RatFunc, ExactError> {
    let mut acc = RatFunc::zero();
    for (m, c) in p.terms() {
        let mut t = RatFunc::constant(c.clone());
        for (v, e) in m.factors() {
            let base = map.get(v).cloned().unwrap_or_else(|| RatFunc::var(v));
            t = &t * &base.powi(*e as i64)?;
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

impl std::ops::Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::reduce(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl std::ops::Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl std::ops::Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl From<Rat> for RatFunc {
    fn from(c: Rat) -> Self {
        RatFunc::constant(c)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.as_constant().is_some_and(|c| c.is_one()) {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            if p.num_terms() > 1 {
                format!("({})", p)
            } else {
                format!("{}", p)
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl std::ops::Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}
