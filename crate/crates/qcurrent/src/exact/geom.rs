//! Geometric mode brackets and their contraction products.
//!
//! A bracket `[x_m, y_{-m}] = (1/m) Σ_j α_j r_j^m` for `m > 0` sums, after
//! weighting by `t^m`, to `-Σ_j α_j ln(1 - r_j t)`. When every `α_j` is an
//! integer the exponential is the finite product `Π_j (1 - r_j t)^{-α_j}`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::ratfunc::RatFunc;
use super::series::TruncSeries;
use super::{ExactError, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeomBracket {
    terms: Vec<(Rat, RatFunc)>,
}

impl GeomBracket {
    pub fn new(terms: Vec<(Rat, RatFunc)>) -> Self {
        let mut merged: Vec<(Rat, RatFunc)> = Vec::new();
        for (a, r) in terms {
            if a.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|(_, r2)| *r2 == r) {
                Some(slot) => slot.0 += a,
                None => merged.push((a, r)),
            }
        }
        merged.retain(|(a, _)| !a.is_zero());
        GeomBracket { terms: merged }
    }

    pub fn terms(&self) -> &[(Rat, RatFunc)] {
        &self.terms
    }

    /// Value of the bracket at mode index `m > 0`.
    pub fn at_mode(&self, m: u32) -> Result<RatFunc, ExactError> {
        let mut acc = RatFunc::zero();
        for (a, r) in &self.terms {
            acc = &acc + &(&RatFunc::constant(a.clone()) * &r.powi(m as i64)?);
        }
        Ok(&acc * &RatFunc::constant(Rat::new(BigInt::one(), BigInt::from(m))))
    }

    /// `Σ_{m=1}^{order} bracket(m) t^m`, the logarithm of the contraction factor.
    pub fn log_series(&self, var: &str, order: usize) -> Result<TruncSeries, ExactError> {
        let mut coeffs = vec![RatFunc::zero(); order + 1];
        for (m, c) in coeffs.iter_mut().enumerate().skip(1) {
            *c = self.at_mode(m as u32)?;
        }
        TruncSeries::from_coeffs(var, coeffs)
    }

    /// The contraction factor as a series, valid for any exponents.
    pub fn contraction_series(&self, var: &str, order: usize) -> Result<TruncSeries, ExactError> {
        self.log_series(var, order)?.exp()
    }

    /// Closed product form, available when every weight is an integer.
    pub fn closed_form(&self) -> Option<LinearFactors> {
        let mut factors = Vec::new();
        for (a, r) in &self.terms {
            if !a.is_integer() {
                return None;
            }
            let e = a.to_integer().to_i64()?;
            factors.push((r.clone(), -e));
        }
        Some(LinearFactors::new(factors))
    }
}

/// `Π_j (1 - r_j t)^{e_j}` with distinct `r_j` and nonzero integer `e_j`,
/// kept in a canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactors {
    factors: Vec<(RatFunc, i64)>,
}

/// A pole of a [`LinearFactors`] product in the expansion variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pole {
    pub location: RatFunc,
    pub order: u32,
    /// Coefficient `C` in `f(t) ≈ C (1 - t/location)^{-order}` near the pole.
    pub coefficient: RatFunc,
}

impl LinearFactors {
    pub fn new(factors: Vec<(RatFunc, i64)>) -> Self {
        let mut out = LinearFactors { factors: Vec::new() };
        for (r, e) in factors {
            out.push(r, e);
        }
        out
    }

    pub fn one() -> Self {
        LinearFactors { factors: Vec::new() }
    }

    fn push(&mut self, r: RatFunc, e: i64) {
        if e == 0 || r.is_zero() {
            return;
        }
        match self.factors.iter_mut().find(|(r2, _)| *r2 == r) {
            Some(slot) => slot.1 += e,
            None => self.factors.push((r, e)),
        }
        self.factors.retain(|(_, e)| *e != 0);
        self.factors.sort_by_cached_key(|(r, _)| r.to_string());
    }

    pub fn factors(&self) -> &[(RatFunc, i64)] {
        &self.factors
    }

    pub fn mul(&self, other: &LinearFactors) -> LinearFactors {
        let mut out = self.clone();
        for (r, e) in &other.factors {
            out.push(r.clone(), *e);
        }
        out
    }

    pub fn inv(&self) -> LinearFactors {
        LinearFactors { factors: self.factors.iter().map(|(r, e)| (r.clone(), -e)).collect() }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Expand into a single rational function of `var`.
    pub fn to_ratfunc(&self, var: &str) -> Result<RatFunc, ExactError> {
        let t = RatFunc::var(var);
        let mut acc = RatFunc::one();
        for (r, e) in &self.factors {
            let lin = &RatFunc::one() - &(r * &t);
            acc = &acc * &lin.powi(*e)?;
        }
        Ok(acc)
    }

    /// Poles in the expansion variable with their leading coefficients.
    pub fn poles(&self) -> Result<Vec<Pole>, ExactError> {
        let mut out = Vec::new();
        for (k, (r, e)) in self.factors.iter().enumerate() {
            if *e >= 0 {
                continue;
            }
            let loc = r.inv()?;
            let mut coeff = RatFunc::one();
            for (j, (r2, e2)) in self.factors.iter().enumerate() {
                if j == k {
                    continue;
                }
                let val = &RatFunc::one() - &(r2 * &loc);
                if val.is_zero() {
                    return Err(ExactError::DivisionByZero);
                }
                coeff = &coeff * &val.powi(*e2)?;
            }
            out.push(Pole { location: loc, order: e.unsigned_abs() as u32, coefficient: coeff });
        }
        Ok(out)
    }
}

impl fmt::Display for LinearFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (r, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "(1 - ({})*t)", r)?;
            } else {
                write!(f, "(1 - ({})*t)^{}", r, e)?;
            }
        }
        Ok(())
    }
}
