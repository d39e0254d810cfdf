//! Power series in one variable, truncated at a fixed order, with
//! rational-function coefficients.

use std::fmt;

use num_bigint::BigInt;

use super::ratfunc::RatFunc;
use super::{ExactError, Rat};

/// Hard ceiling on the truncation order accepted by the series code.
pub const MAX_SERIES_ORDER: usize = 512;

/// `Σ_{k=0}^{order} c_k x^k + O(x^{order+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    var: String,
    coeffs: Vec<RatFunc>,
}

impl TruncSeries {
    pub fn zero(var: &str, order: usize) -> Result<Self, ExactError> {
        check_order(order)?;
        Ok(TruncSeries { var: var.to_string(), coeffs: vec![RatFunc::zero(); order + 1] })
    }

    pub fn one(var: &str, order: usize) -> Result<Self, ExactError> {
        let mut s = Self::zero(var, order)?;
        s.coeffs[0] = RatFunc::one();
        Ok(s)
    }

    pub fn from_coeffs(var: &str, coeffs: Vec<RatFunc>) -> Result<Self, ExactError> {
        if coeffs.is_empty() {
            return Err(ExactError::EmptySeries);
        }
        check_order(coeffs.len() - 1)?;
        Ok(TruncSeries { var: var.to_string(), coeffs })
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &RatFunc {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    fn compatible(&self, other: &Self) -> Result<usize, ExactError> {
        if self.var != other.var {
            return Err(ExactError::VariableMismatch(self.var.clone(), other.var.clone()));
        }
        Ok(self.order().min(other.order()))
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        let n = self.compatible(other)?;
        let coeffs = (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        Ok(TruncSeries { var: self.var.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactError> {
        let n = self.compatible(other)?;
        let coeffs = (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        Ok(TruncSeries { var: self.var.clone(), coeffs })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        let n = self.compatible(other)?;
        let mut coeffs = vec![RatFunc::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(&self.coeffs[i] * &other.coeffs[j]);
            }
        }
        Ok(TruncSeries { var: self.var.clone(), coeffs })
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        TruncSeries { var: self.var.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inv(&self) -> Result<Self, ExactError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let inv0 = a0.inv()?;
        let n = self.order();
        let mut out = vec![RatFunc::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = RatFunc::zero();
            for j in 1..=k {
                acc = &acc + &(&self.coeffs[j] * &out[k - j]);
            }
            out[k] = -&(&acc * &inv0);
        }
        Ok(TruncSeries { var: self.var.clone(), coeffs: out })
    }

    /// `exp(f)` for a series with vanishing constant term.
    pub fn exp(&self) -> Result<Self, ExactError> {
        if !self.coeffs[0].is_zero() {
            return Err(ExactError::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut g = vec![RatFunc::zero(); n + 1];
        g[0] = RatFunc::one();
        // n g_n = sum_{k=1}^n k f_k g_{n-k}
        for m in 1..=n {
            let mut acc = RatFunc::zero();
            for k in 1..=m {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                let kk = RatFunc::from_int(k as i64);
                acc = &acc + &(&(&kk * &self.coeffs[k]) * &g[m - k]);
            }
            g[m] = &acc * &RatFunc::constant(Rat::new(BigInt::from(1), BigInt::from(m as i64)));
        }
        Ok(TruncSeries { var: self.var.clone(), coeffs: g })
    }

    /// Taylor expansion at `var = 0` of a rational function regular there.
    pub fn expand(f: &RatFunc, var: &str, order: usize) -> Result<Self, ExactError> {
        check_order(order)?;
        let num = poly_series(f.numer(), var, order)?;
        let den = poly_series(f.denom(), var, order)?;
        if den.coeffs[0].is_zero() {
            return Err(ExactError::PoleAtOrigin(var.to_string()));
        }
        num.mul(&den.inv()?)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        TruncSeries { var: self.var.clone(), coeffs: self.coeffs[..=n].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_zero)
    }
}

fn poly_series(p: &super::poly::Poly, var: &str, order: usize) -> Result<TruncSeries, ExactError> {
    let uni = p.to_univariate(var);
    let mut coeffs = vec![RatFunc::zero(); order + 1];
    for (k, c) in uni.into_iter().enumerate() {
        if k <= order {
            coeffs[k] = RatFunc::from_poly(c);
        }
    }
    TruncSeries::from_coeffs(var, coeffs)
}

fn check_order(order: usize) -> Result<(), ExactError> {
    if order > MAX_SERIES_ORDER {
        Err(ExactError::OrderOverflow { requested: order, cap: MAX_SERIES_ORDER })
    } else {
        Ok(())
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})*{}", c, self.var)?,
                _ => write!(f, "({})*{}^{}", c, self.var, k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}
