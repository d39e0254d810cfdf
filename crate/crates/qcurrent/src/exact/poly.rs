//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rat;

/// A monomial: variable names with positive exponents, sorted by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(Vec<(String, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(name: &str, exp: u32) -> Self {
        if exp == 0 {
            Mono::one()
        } else {
            Mono(vec![(name.to_string(), exp)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.0.iter().find(|(v, _)| v == var).map_or(0, |(_, e)| *e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut map: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (v, e) in &other.0 {
            *map.entry(v.clone()).or_insert(0) += e;
        }
        Mono(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    /// `self / other` when every exponent of `other` is dominated.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut map: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (v, e) in &other.0 {
            let slot = map.get_mut(v)?;
            if *slot < *e {
                return None;
            }
            *slot -= e;
        }
        Some(Mono(map.into_iter().filter(|(_, e)| *e > 0).collect()))
    }

    /// Remove `var` from the monomial, returning its former exponent.
    fn split_off(&self, var: &str) -> (u32, Mono) {
        let exp = self.degree_in(var);
        let rest = self.0.iter().filter(|(v, _)| v != var).cloned().collect();
        (exp, Mono(rest))
    }

    /// Pure lexicographic comparison with alphabetically earlier variables
    /// more significant.
    pub fn lex_cmp(&self, other: &Mono) -> Ordering {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

/// Polynomial in named variables with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Mono, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Mono::one(), c);
        }
        p
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(Rat::from_integer(BigInt::from(n)))
    }

    pub fn var(name: &str) -> Self {
        Poly::monomial(Rat::one(), Mono::var(name, 1))
    }

    pub fn monomial(c: Rat, m: Mono) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Mono::is_one)
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn vars(&self) -> Vec<String> {
        let mut vs: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.terms.keys().map(|m| m.degree_in(var)).max().unwrap_or(0)
    }

    /// Leading term under lex order.
    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Exact quotient, or `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        let (lm, lc) = divisor.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            let t = Poly::monomial(qc, qm);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// View as a polynomial in `var`, coefficients indexed by power.
    pub fn to_univariate(&self, var: &str) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut coeffs = vec![Poly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(var);
            coeffs[e as usize].add_term(rest, c.clone());
        }
        coeffs
    }

    pub fn from_univariate(var: &str, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            out = &out + &c.mul_mono(&Mono::var(var, k as u32));
        }
        out
    }

    /// Make the lex-leading coefficient equal to one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    /// Greatest common divisor, normalised to be monic.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.num_terms() == 1 {
            return monomial_gcd(self, other);
        }
        if other.num_terms() == 1 {
            return monomial_gcd(other, self);
        }
        let mut vars = self.vars();
        vars.extend(other.vars());
        vars.sort();
        vars.dedup();
        match vars.first() {
            None => Poly::one(),
            Some(x) => gcd_in(self, other, x).monic(),
        }
    }

    pub fn eval(&self, point: &dyn Fn(&str) -> Option<Complex64>) -> Option<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(rat_to_f64(c), 0.0);
            for (v, e) in &m.0 {
                t *= point(v)?.powu(*e);
            }
            acc += t;
        }
        Some(acc)
    }
}

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // Fall back to scaled division for huge numerators or denominators.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
        n / d
    }
}

/// Gcd of a single term with an arbitrary polynomial: the variable powers
/// dividing every term of both.
fn monomial_gcd(mono: &Poly, other: &Poly) -> Poly {
    let (m, _) = mono.terms.iter().next().expect("single term");
    let mut common: Vec<(String, u32)> = m.0.clone();
    for k in other.terms.keys() {
        for slot in common.iter_mut() {
            slot.1 = slot.1.min(k.degree_in(&slot.0));
        }
    }
    common.retain(|(_, e)| *e > 0);
    Poly::monomial(Rat::one(), Mono(common))
}

/// Content (gcd of coefficients) of a univariate view.
fn content(coeffs: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for c in coeffs {
        g = g.gcd(c);
        if g.is_constant() && !g.is_zero() {
            return Poly::one();
        }
    }
    g
}

fn trim(coeffs: &mut Vec<Poly>) {
    while coeffs.len() > 1 && coeffs.last().is_some_and(Poly::is_zero) {
        coeffs.pop();
    }
}

/// Primitive part, also scaled so the top coefficient is monic; the scalar
/// normalisation keeps pseudo-remainder sequences from growing.
fn primitive(coeffs: &[Poly]) -> Vec<Poly> {
    let c = content(coeffs);
    if c.is_zero() {
        return coeffs.to_vec();
    }
    let divided: Vec<Poly> = coeffs
        .iter()
        .map(|p| p.div_exact(&c).expect("content divides every coefficient"))
        .collect();
    let scale = divided
        .iter()
        .rev()
        .find(|p| !p.is_zero())
        .and_then(|p| p.leading().map(|(_, lc)| lc.recip()));
    match scale {
        Some(k) => divided.iter().map(|p| p.scale(&k)).collect(),
        None => divided,
    }
}

/// Pseudo-remainder of univariate views over the coefficient ring.
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Vec<Poly> = r.iter().map(|c| c * lb).collect();
        for (k, bc) in b.iter().enumerate() {
            next[k + shift] = &next[k + shift] - &(&lr * bc);
        }
        trim(&mut next);
        if next.len() - 1 == dr && !next[dr].is_zero() {
            unreachable!("pseudo-division failed to lower the degree");
        }
        r = next;
        if r.len() - 1 < db {
            break;
        }
    }
    r
}

fn gcd_in(a: &Poly, b: &Poly, x: &str) -> Poly {
    let ua = a.to_univariate(x);
    let ub = b.to_univariate(x);
    let ca = content(&ua);
    let cb = content(&ub);
    let c = ca.gcd(&cb);
    let mut pa = primitive(&ua);
    let mut pb = primitive(&ub);
    trim(&mut pa);
    trim(&mut pb);
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        if pb.len() == 1 {
            // pb is a nonzero primitive constant in x, so the x-part is trivial.
            return c;
        }
        let r = prem(&pa, &pb);
        if r.iter().all(Poly::is_zero) {
            break;
        }
        pa = pb;
        pb = primitive(&r);
        trim(&mut pb);
    }
    let g = Poly::from_univariate(x, &primitive(&pb));
    &c * &g
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.lex_cmp(a.0));
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let unit = mag.is_one();
            if !unit || m.is_one() {
                if mag.is_integer() {
                    write!(f, "{}", mag)?;
                } else {
                    write!(f, "({})", mag)?;
                }
                if !m.is_one() {
                    write!(f, "*")?;
                }
            }
            for (k, (v, e)) in m.0.iter().enumerate() {
                if k > 0 {
                    write!(f, "*")?;
                }
                if *e == 1 {
                    write!(f, "{}", v)?;
                } else {
                    write!(f, "{}^{}", v, e)?;
                }
            }
        }
        Ok(())
    }
}
