use std::collections::BTreeMap;

use crate::exact::{ExactError, GeomBracket, RatFunc};

/// Integer-indexed Heisenberg families with zero-mode pairs.
///
/// A stored bracket for `(x, y)` gives `[x_n, y_{-n}]` for `n > 0`; negative
/// indices follow from antisymmetry, `[x_{-n}, y_n] = -[y_n, x_{-n}]`.
#[derive(Clone, Debug, Default)]
pub struct DiscreteModes {
    families: Vec<String>,
    zero_pairs: Vec<(String, String)>,
    brackets: BTreeMap<(String, String), GeomBracket>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ModeError {
    #[error("no bracket stored for ({0}, {1})")]
    MissingBracket(String, String),
    #[error("unknown mode family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl DiscreteModes {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn family(mut self, name: &str) -> Self {
        self.families.push(name.to_string());
        self
    }

    pub fn zero_pair(mut self, p: &str, q: &str) -> Self {
        self.zero_pairs.push((p.to_string(), q.to_string()));
        self
    }

    pub fn bracket_of(mut self, x: &str, y: &str, b: GeomBracket) -> Self {
        self.brackets.insert((x.to_string(), y.to_string()), b);
        self
    }

    pub fn insert_bracket(&mut self, x: &str, y: &str, b: GeomBracket) {
        self.brackets.insert((x.to_string(), y.to_string()), b);
    }

    pub fn families(&self) -> &[String] {
        &self.families
    }

    pub fn zero_pairs(&self) -> &[(String, String)] {
        &self.zero_pairs
    }

    /// The positive-mode bracket data of `(x, y)`.
    pub fn geom(&self, x: &str, y: &str) -> Result<&GeomBracket, ModeError> {
        for f in [x, y] {
            if !self.families.iter().any(|g| g == f) {
                return Err(ModeError::UnknownFamily(f.to_string()));
            }
        }
        self.brackets
            .get(&(x.to_string(), y.to_string()))
            .ok_or_else(|| ModeError::MissingBracket(x.to_string(), y.to_string()))
    }

    /// `[x_n, y_m]` exactly.
    pub fn bracket(&self, x: &str, n: i64, y: &str, m: i64) -> Result<RatFunc, ModeError> {
        if n + m != 0 || n == 0 {
            self.geom(x, y)?;
            return Ok(RatFunc::zero());
        }
        if n > 0 {
            Ok(self.geom(x, y)?.at_mode(n as u32)?)
        } else {
            Ok(-&self.geom(y, x)?.at_mode(m as u32)?)
        }
    }

    /// `(1/n) Σ α_j r_j^n` read for every nonzero `n`, including negative
    /// ones, without the antisymmetric extension.
    pub fn literal(&self, x: &str, n: i64, y: &str) -> Result<RatFunc, ModeError> {
        let b = self.geom(x, y)?;
        let mut acc = RatFunc::zero();
        for (a, r) in b.terms() {
            acc = &acc + &(&RatFunc::constant(a.clone()) * &r.powi(n)?);
        }
        Ok(&acc * &RatFunc::from_int(n).inv()?)
    }

    /// First `(x, n, y)` with `|n| <= max` where the literal formula breaks
    /// `[x_n, y_{-n}] = -[y_{-n}, x_n]`, if any.
    pub fn literal_antisymmetry_defect(&self, max: i64) -> Result<Option<(String, i64, String)>, ModeError> {
        for (x, y) in self.brackets.keys() {
            if !self.brackets.contains_key(&(y.clone(), x.clone())) {
                continue;
            }
            for n in (-max..=max).filter(|n| *n != 0) {
                let lhs = self.literal(x, n, y)?;
                let rhs = -&self.literal(y, -n, x)?;
                if lhs != rhs {
                    return Ok(Some((x.clone(), n, y.clone())));
                }
            }
        }
        Ok(None)
    }
}
