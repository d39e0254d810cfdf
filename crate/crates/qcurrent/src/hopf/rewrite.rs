use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_complex::Complex64;

use super::word::{Coef, ExchangeFactor, FamilyLevels, Gen, LevelRef, Symbol, TensorWord};
use crate::dsl::{eval_at, AlgebraSpec};
use crate::exact::{EvalFailure, Point};
use crate::symexpr::SymExpr;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RewriteError {
    #[error("{0} and {1} meet in one slot; no exchange rule relates them")]
    Collision(String, String),
    #[error("the algebra has no current `{0}`")]
    UnknownCurrent(String),
}

/// Structure functions of one algebra keyed by ordered current pair.
#[derive(Clone, Debug)]
pub struct ExchangeTable {
    entries: BTreeMap<(Gen, Gen), (SymExpr, String, String)>,
    rules: Vec<(String, SymExpr)>,
}

impl ExchangeTable {
    pub fn from_spec(alg: &AlgebraSpec) -> Result<Self, RewriteError> {
        let mut entries = BTreeMap::new();
        for x in Gen::ALL {
            if alg.current(x.name()).is_none() {
                return Err(RewriteError::UnknownCurrent(x.name().into()));
            }
            for y in Gen::ALL {
                if let Some(e) = alg.exchange(x.name(), y.name()) {
                    let (Some(u), Some(v)) = (e.left.var(), e.right.var()) else { continue };
                    entries.insert((x, y), (e.structure_function(), u.to_string(), v.to_string()));
                }
            }
        }
        Ok(ExchangeTable { entries, rules: alg.rules() })
    }

    /// Whether the algebra states `x(u) y(v) = f y(v) x(u)` directly.
    pub fn has(&self, x: Gen, y: Gen) -> bool {
        self.entries.contains_key(&(x, y))
    }

    /// Whether `x(u) y(v)` can be reordered, directly or through the reversed relation.
    pub fn relates(&self, x: Gen, y: Gen) -> bool {
        self.entries.contains_key(&(x, y)) || self.entries.contains_key(&(y, x))
    }

    /// `f` in `X(u) Y(v) = f Y(v) X(u)` for the algebra `alg` at a sample point.
    pub fn eval(&self, f: &ExchangeFactor, at: &SamplePoint) -> Result<Complex64, EvalFailure> {
        let (u, v) = (at.rapidity(f.u), at.rapidity(f.v));
        let value = if let Some((expr, un, vn)) = self.entries.get(&(f.left, f.right)) {
            eval_at(expr, &self.rules, &at.point(f.alg, un, u, vn, v))?
        } else if let Some((expr, un, vn)) = self.entries.get(&(f.right, f.left)) {
            1.0 / eval_at(expr, &self.rules, &at.point(f.alg, un, v, vn, u))?
        } else {
            return Err(EvalFailure::Other(format!("no exchange rule for {}{}", f.left.name(), f.right.name())));
        };
        Ok(value.powi(f.power))
    }

    pub fn eval_coef(&self, c: &Coef, at: &SamplePoint) -> Result<Complex64, EvalFailure> {
        let mut acc = Complex64::new(c.scale as f64, 0.0);
        if c.scale == 0 {
            return Ok(acc);
        }
        for f in &c.factors {
            acc *= self.eval(f, at)?;
        }
        Ok(acc)
    }
}

/// Numeric values of the free rapidities and family parameters.
#[derive(Clone, Debug)]
pub struct SamplePoint<'a> {
    pub rapidities: Vec<f64>,
    pub hbar: f64,
    pub eta: f64,
    pub levels: &'a FamilyLevels,
}

impl SamplePoint<'_> {
    pub fn rapidity(&self, r: super::Rapidity) -> Complex64 {
        Complex64::new(self.rapidities[r.base as usize], self.hbar * r.quarters as f64 / 4.0)
    }

    fn point(&self, alg: LevelRef, un: &str, u: Complex64, vn: &str, v: Complex64) -> Point {
        let mut p = Point::new();
        p.insert("eta".into(), Complex64::new(self.levels.eta(alg.eta_index, self.eta, self.hbar), 0.0));
        p.insert("hbar".into(), Complex64::new(self.hbar, 0.0));
        p.insert("c".into(), Complex64::new(alg.c as f64, 0.0));
        p.insert(un.into(), u);
        p.insert(vn.into(), v);
        p
    }
}

/// Canonical per-slot products mapped to the coefficients that multiply them.
pub type NormalForm = BTreeMap<Vec<Symbol>, Vec<Coef>>;

fn canonical(a: &Symbol, b: &Symbol) -> Ordering {
    (a.gen, a.rap, a.inverse).cmp(&(b.gen, b.rap, b.inverse))
}

fn cancels(a: &Symbol, b: &Symbol) -> bool {
    a.gen == b.gen && a.rap == b.rap && a.level == b.level && a.inverse != b.inverse
}

/// Reorder every slot into the canonical order (current, then rapidity,
/// then inverse flag). Each adjacent swap multiplies by the exchange factor
/// of that slot's algebra, inverted once per inverse symbol involved, and
/// `H(u) H(u)^{-1}` pairs are removed. Terms with equal products are grouped.
pub fn normal_order(
    word: &TensorWord,
    table: &ExchangeTable,
    levels: &FamilyLevels,
) -> Result<NormalForm, RewriteError> {
    let mut out = NormalForm::new();
    for term in &word.terms {
        if term.coef.is_zero() {
            continue;
        }
        let mut syms = term.syms.clone();
        let mut coef = term.coef.clone();
        'restart: loop {
            for i in 0..syms.len().saturating_sub(1) {
                let (a, b) = (syms[i], syms[i + 1]);
                if a.slot != b.slot {
                    continue;
                }
                if cancels(&a, &b) {
                    syms.drain(i..i + 2);
                    continue 'restart;
                }
                if canonical(&a, &b) == Ordering::Greater {
                    if !table.relates(a.gen, b.gen) {
                        return Err(RewriteError::Collision(a.to_string(), b.to_string()));
                    }
                    let power = if a.inverse == b.inverse { 1 } else { -1 };
                    let alg = levels.level_ref(a.level);
                    coef = coef.mul(&Coef::factor(ExchangeFactor {
                        left: a.gen,
                        right: b.gen,
                        u: a.rap,
                        v: b.rap,
                        alg,
                        power,
                    }));
                    syms.swap(i, i + 1);
                    continue 'restart;
                }
            }
            break;
        }
        out.entry(syms).or_default().push(coef);
    }
    Ok(out)
}
