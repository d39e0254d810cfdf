use std::fmt;

use crate::dsl::Parity;

/// A generating current, without its argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    E,
    F,
    HPlus,
    HMinus,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::E, Gen::F, Gen::HPlus, Gen::HMinus];

    pub fn name(self) -> &'static str {
        match self {
            Gen::E => "E",
            Gen::F => "F",
            Gen::HPlus => "H+",
            Gen::HMinus => "H-",
        }
    }

    pub fn from_name(name: &str) -> Option<Gen> {
        Gen::ALL.into_iter().find(|g| g.name() == name)
    }

    pub fn parity(self) -> Parity {
        match self {
            Gen::E | Gen::F => Parity::Odd,
            Gen::HPlus | Gen::HMinus => Parity::Even,
        }
    }
}

/// `base + i*hbar*quarters/4`, where `base` indexes the free rapidities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rapidity {
    pub base: u8,
    pub quarters: i64,
}

impl Rapidity {
    pub fn var(base: u8) -> Self {
        Rapidity { base, quarters: 0 }
    }

    pub fn shifted(self, quarters: i64) -> Self {
        Rapidity { base: self.base, quarters: self.quarters + quarters }
    }
}

impl fmt::Display for Rapidity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = ["u", "v", "w", "t"].get(self.base as usize).copied().unwrap_or("x");
        match self.quarters {
            0 => write!(f, "{v}"),
            q if q > 0 => write!(f, "{v}+{q}ih/4"),
            q => write!(f, "{v}-{}ih/4", -q),
        }
    }
}

/// One factor of a product: a current (or its inverse, for `H±`) at a
/// rapidity, in the algebra with family index `level`, in tensor slot `slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub slot: u8,
    pub gen: Gen,
    pub rap: Rapidity,
    pub inverse: bool,
    pub level: i32,
}

impl Symbol {
    pub fn new(gen: Gen, rap: Rapidity, level: i32) -> Self {
        Symbol { slot: 0, gen, rap, inverse: false, level }
    }

    pub fn odd(&self) -> bool {
        self.gen.parity() == Parity::Odd
    }

    pub fn inverted(self) -> Self {
        Symbol { inverse: !self.inverse, ..self }
    }

    pub fn in_slot(self, slot: u8) -> Self {
        Symbol { slot, ..self }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}; {})", self.gen.name(), self.rap, self.level)?;
        if self.inverse {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

/// Family parameters selecting a concrete algebra: `eta^(eta_index)` and
/// central value `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelRef {
    pub eta_index: i32,
    pub c: i64,
}

/// `f_{left,right}(u, v)` of the algebra `alg`, raised to `power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExchangeFactor {
    pub left: Gen,
    pub right: Gen,
    pub u: Rapidity,
    pub v: Rapidity,
    pub alg: LevelRef,
    pub power: i32,
}

/// An integer times a product of exchange factors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coef {
    pub scale: i64,
    pub factors: Vec<ExchangeFactor>,
}

impl Coef {
    pub fn one() -> Self {
        Coef { scale: 1, factors: Vec::new() }
    }

    pub fn int(scale: i64) -> Self {
        Coef { scale, factors: Vec::new() }
    }

    pub fn factor(f: ExchangeFactor) -> Self {
        Coef { scale: 1, factors: vec![f] }
    }

    pub fn mul(&self, other: &Coef) -> Coef {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Coef { scale: self.scale * other.scale, factors }
    }

    pub fn negated(&self) -> Coef {
        Coef { scale: -self.scale, factors: self.factors.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.scale == 0
    }
}

/// The levels `c_n`, stored from index 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyLevels {
    pub c: Vec<i64>,
}

impl FamilyLevels {
    pub fn new(c: Vec<i64>) -> Self {
        FamilyLevels { c }
    }

    pub fn constant(value: i64, len: usize) -> Self {
        FamilyLevels { c: vec![value; len] }
    }

    /// `c_n`; indices outside the stored range are level zero.
    pub fn at(&self, n: i32) -> i64 {
        usize::try_from(n).ok().and_then(|k| self.c.get(k).copied()).unwrap_or(0)
    }

    /// `eta^(n)` from `1/eta^(n+1) - 1/eta^(n) = hbar*c_n` and `eta^(1) = eta`.
    pub fn eta(&self, n: i32, eta: f64, hbar: f64) -> f64 {
        let mut inv = 1.0 / eta;
        if n >= 1 {
            for k in 1..n {
                inv += hbar * self.at(k) as f64;
            }
        } else {
            for k in (n..1).rev() {
                inv -= hbar * self.at(k) as f64;
            }
        }
        1.0 / inv
    }

    pub fn level_ref(&self, n: i32) -> LevelRef {
        LevelRef { eta_index: n, c: self.at(n) }
    }
}

impl fmt::Display for FamilyLevels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A coefficient times symbols sorted by slot.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coef: Coef,
    pub syms: Vec<Symbol>,
}

/// A sum of [`Term`]s over a fixed tensor arity; `slots[k]` is the family
/// index of the algebra in slot `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorWord {
    pub slots: Vec<i32>,
    pub terms: Vec<Term>,
}

impl TensorWord {
    pub fn zero(slots: Vec<i32>) -> Self {
        TensorWord { slots, terms: Vec::new() }
    }

    pub fn unit(slots: Vec<i32>) -> Self {
        TensorWord { slots, terms: vec![Term { coef: Coef::one(), syms: Vec::new() }] }
    }

    pub fn scalar(coef: Coef) -> Self {
        TensorWord { slots: Vec::new(), terms: vec![Term { coef, syms: Vec::new() }] }
    }

    /// A single current in a one-slot word.
    pub fn generator(sym: Symbol) -> Self {
        TensorWord { slots: vec![sym.level], terms: vec![Term { coef: Coef::one(), syms: vec![sym.in_slot(0)] }] }
    }

    /// An ordered product of symbols with explicit slots.
    pub fn monomial(slots: Vec<i32>, coef: Coef, mut syms: Vec<Symbol>) -> Self {
        syms.sort_by_key(|s| s.slot);
        TensorWord { slots, terms: vec![Term { coef, syms }] }
    }

    pub fn arity(&self) -> usize {
        self.slots.len()
    }

    pub fn add(mut self, other: TensorWord) -> Self {
        debug_assert_eq!(self.slots, other.slots);
        self.terms.extend(other.terms);
        self
    }

    pub fn scaled(mut self, c: &Coef) -> Self {
        for t in &mut self.terms {
            t.coef = c.mul(&t.coef);
        }
        self
    }

    /// The super product `(A ⊗ B)(C ⊗ D) = (-1)^{|B||C|} AC ⊗ BD`, slot by slot.
    pub fn mul(&self, other: &TensorWord) -> TensorWord {
        debug_assert_eq!(self.slots, other.slots);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let crossings = b
                    .syms
                    .iter()
                    .filter(|y| y.odd())
                    .map(|y| a.syms.iter().filter(|x| x.slot > y.slot && x.odd()).count())
                    .sum::<usize>();
                let sign = if crossings % 2 == 0 { 1 } else { -1 };
                let mut syms = a.syms.clone();
                syms.extend_from_slice(&b.syms);
                syms.sort_by_key(|s| s.slot);
                terms.push(Term { coef: a.coef.mul(&b.coef).mul(&Coef::int(sign)), syms });
            }
        }
        TensorWord { slots: self.slots.clone(), terms }
    }

    /// `self ⊗ other` with `other`'s slots appended.
    pub fn tensor(&self, other: &TensorWord) -> TensorWord {
        let offset = self.arity() as u8;
        let mut slots = self.slots.clone();
        slots.extend_from_slice(&other.slots);
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let mut syms = a.syms.clone();
                syms.extend(b.syms.iter().map(|s| s.in_slot(s.slot + offset)));
                terms.push(Term { coef: a.coef.mul(&b.coef), syms });
            }
        }
        TensorWord { slots, terms }
    }
}

impl fmt::Display for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{}x{}]", t.coef.scale, t.coef.factors.len())?;
            for slot in 0..self.arity() as u8 {
                if slot > 0 {
                    write!(f, " ⊗")?;
                }
                let inside: Vec<String> = t.syms.iter().filter(|s| s.slot == slot).map(|s| s.to_string()).collect();
                if inside.is_empty() {
                    write!(f, " 1")?;
                } else {
                    write!(f, " {}", inside.join(" "))?;
                }
            }
        }
        Ok(())
    }
}
