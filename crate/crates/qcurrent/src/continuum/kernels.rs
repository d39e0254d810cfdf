//! Continuum Heisenberg kernels and the brackets of the composite fields.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dsl::parse_expr;
use crate::exact::{rel_error, Point};
use crate::symexpr::{EvalError, ParamEnv, SymExpr};

/// Which pair of generating kernels is in use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum KernelVariant {
    /// Two deformation parameters tied by `1/eta' = 1/eta + hbar`.
    HbarEta,
    /// Independent `eta`; the composite fields carry no `1/hbar`.
    GammaSqrtQ,
}

impl KernelVariant {
    pub fn name(self) -> &'static str {
        match self {
            KernelVariant::HbarEta => "hbar-eta",
            KernelVariant::GammaSqrtQ => "gamma-sqrt-q",
        }
    }
}

/// Which bracket of the composite fields `a`, `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldPair {
    AA,
    BB,
    AB,
    BA,
}

impl FieldPair {
    pub const ALL: [FieldPair; 4] = [FieldPair::AA, FieldPair::BB, FieldPair::AB, FieldPair::BA];

    pub fn label(self) -> &'static str {
        match self {
            FieldPair::AA => "aa",
            FieldPair::BB => "bb",
            FieldPair::AB => "ab",
            FieldPair::BA => "ba",
        }
    }
}

const HBAR_ETA: [&str; 9] = [
    "l/(4*cosh(hbar*l/2) + (csch(l/(2*eta)) - csch(l/(2*eta')))*sinh(hbar*l) + 2)",
    "l*((1 + csch(l/(2*eta))*sinh(hbar*l))*(1 - csch(l/(2*eta'))*sinh(hbar*l)) - 4*cosh(hbar*l/2)^2)\
     /(4*cosh(hbar*l/2) + (csch(l/(2*eta)) - csch(l/(2*eta')))*sinh(hbar*l) + 2)",
    "(csch(l/(2*eta))*sinh(hbar*l) + 2*cosh(hbar*l/2) + 1)/(hbar*l)",
    "(csch(l/(2*eta'))*sinh(hbar*l) - 2*cosh(hbar*l/2) - 1)/(hbar*l)",
    "1/(hbar*l)",
    "1/(hbar*l)",
    "-(1 + sinh(hbar*l)/sinh(l/(2*eta)))/(hbar^2*l)",
    "-(1 - sinh(hbar*l)/sinh(l/(2*eta')))/(hbar^2*l)",
    "2*cosh(hbar*l/2)/(hbar^2*l)",
];

const GAMMA_SQRT_Q: [&str; 9] = [
    "l/(4*cosh(hbar*l/2) + 2)",
    "-l*(csch(l/(2*eta))^2*sinh(hbar*l)^2 + 2*cosh(hbar*l) + 1)/(4*cosh(hbar*l/2) + 2)",
    "(csch(l/(2*eta))*sinh(hbar*l) + 2*cosh(hbar*l/2) + 1)/l",
    "(csch(l/(2*eta))*sinh(hbar*l) - 2*cosh(hbar*l/2) - 1)/l",
    "1/l",
    "1/l",
    "-(1 + sinh(hbar*l)/sinh(l/(2*eta)))/l",
    "-(1 - sinh(hbar*l)/sinh(l/(2*eta)))/l",
    "2*cosh(hbar*l/2)/l",
];

/// Generating kernels `A`, `B`, the mixing coefficients `X`, `Y`, and the
/// stated brackets of `a = X_a α + Y_a β`, `b = X_b α + Y_b β`.
#[derive(Clone, Debug)]
pub struct KernelSet {
    pub variant: KernelVariant,
    pub a: SymExpr,
    pub b: SymExpr,
    pub xa: SymExpr,
    pub xb: SymExpr,
    pub ya: SymExpr,
    pub yb: SymExpr,
    pub aa: SymExpr,
    pub bb: SymExpr,
    pub ab: SymExpr,
}

#[derive(Debug, thiserror::Error)]
pub enum KernelError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("Richardson extrapolation did not settle (last two estimates differ by {0:.3e})")]
    Extrapolation(f64),
}

impl KernelSet {
    pub fn new(variant: KernelVariant) -> Self {
        let src = match variant {
            KernelVariant::HbarEta => HBAR_ETA,
            KernelVariant::GammaSqrtQ => GAMMA_SQRT_Q,
        };
        let [a, b, xa, xb, ya, yb, aa, bb, ab] =
            src.map(|s| parse_expr(s, &["hbar", "eta", "eta'"], &["l"]).expect("built-in kernel parses"));
        KernelSet { variant, a, b, xa, xb, ya, yb, aa, bb, ab }
    }

    /// `eta'` as fixed by the variant.
    pub fn eta_prime(&self, hbar: f64, eta: f64) -> f64 {
        match self.variant {
            KernelVariant::HbarEta => 1.0 / (1.0 / eta + hbar),
            KernelVariant::GammaSqrtQ => eta,
        }
    }

    pub fn env(&self, hbar: f64, eta: f64) -> ParamEnv {
        ParamEnv::new().set("hbar", hbar).set("eta", eta).set("eta'", self.eta_prime(hbar, eta))
    }

    pub fn eval(&self, e: &SymExpr, env: &ParamEnv, l: impl Into<Complex64>) -> Result<Complex64, EvalError> {
        let mut p = Point::new();
        p.insert("l".into(), l.into());
        e.eval(env, &p)
    }

    /// `X_f(λ) X_g(-λ) A(λ) + Y_f(λ) Y_g(-λ) B(λ)`.
    pub fn derived(&self, pair: FieldPair, env: &ParamEnv, l: f64) -> Result<Complex64, EvalError> {
        let (xf, yf, xg, yg) = match pair {
            FieldPair::AA => (&self.xa, &self.ya, &self.xa, &self.ya),
            FieldPair::BB => (&self.xb, &self.yb, &self.xb, &self.yb),
            FieldPair::AB => (&self.xa, &self.ya, &self.xb, &self.yb),
            FieldPair::BA => (&self.xb, &self.yb, &self.xa, &self.ya),
        };
        let ev = |e: &SymExpr, l: f64| self.eval(e, env, l);
        Ok(ev(xf, l)? * ev(xg, -l)? * ev(&self.a, l)? + ev(yf, l)? * ev(yg, -l)? * ev(&self.b, l)?)
    }

    pub fn stated(&self, pair: FieldPair, env: &ParamEnv, l: impl Into<Complex64>) -> Result<Complex64, EvalError> {
        let e = match pair {
            FieldPair::AA => &self.aa,
            FieldPair::BB => &self.bb,
            FieldPair::AB | FieldPair::BA => &self.ab,
        };
        self.eval(e, env, l)
    }

    /// `lim_{λ→0} A(λ)/λ` and `lim B(λ)/λ` by Richardson extrapolation.
    pub fn slopes(&self, hbar: f64, eta: f64) -> Result<(f64, f64), KernelError> {
        let env = self.env(hbar, eta);
        let sa = richardson(|l| Ok(self.eval(&self.a, &env, l)?.re / l))?;
        let sb = richardson(|l| Ok(self.eval(&self.b, &env, l)?.re / l))?;
        Ok((sa, sb))
    }

    /// The closed-form small-λ slopes of `A` and `B`.
    pub fn expected_slopes(&self, hbar: f64, eta: f64) -> (f64, f64) {
        let ep = self.eta_prime(hbar, eta);
        let den = 2.0 * (eta - ep) * hbar + 6.0;
        match self.variant {
            KernelVariant::HbarEta => (1.0 / den, ((1.0 + 2.0 * hbar * eta) * (1.0 - 2.0 * hbar * ep) - 4.0) / den),
            KernelVariant::GammaSqrtQ => (1.0 / 6.0, -(3.0 + 4.0 * eta * eta * hbar * hbar) / 6.0),
        }
    }
}

const RICHARDSON_START: f64 = 0.4;
const RICHARDSON_LEVELS: usize = 7;
const RICHARDSON_SETTLE: f64 = 1e-9;

/// Extrapolate an even function of `λ` to `λ = 0` from `λ = h, h/2, h/4, ...`.
fn richardson(f: impl Fn(f64) -> Result<f64, KernelError>) -> Result<f64, KernelError> {
    let mut table: Vec<Vec<f64>> = Vec::new();
    let mut h = RICHARDSON_START;
    for n in 0..RICHARDSON_LEVELS {
        let mut row = vec![f(h)?];
        for k in 1..=n {
            let factor = 4f64.powi(k as i32);
            let prev = &table[n - 1];
            row.push((factor * row[k - 1] - prev[k - 1]) / (factor - 1.0));
        }
        table.push(row);
        h /= 2.0;
    }
    let last = table[RICHARDSON_LEVELS - 1][RICHARDSON_LEVELS - 1];
    let before = table[RICHARDSON_LEVELS - 2][RICHARDSON_LEVELS - 2];
    if (last - before).abs() > RICHARDSON_SETTLE * last.abs().max(1.0) {
        return Err(KernelError::Extrapolation((last - before).abs()));
    }
    Ok(last)
}

/// Sampling ranges for kernel checks.
#[derive(Clone, Copy, Debug)]
pub struct KernelDomain {
    pub lambda: (f64, f64),
    pub hbar: (f64, f64),
    pub eta: (f64, f64),
}

impl Default for KernelDomain {
    fn default() -> Self {
        KernelDomain { lambda: (0.1, 6.0), hbar: (0.02, 0.45), eta: (0.3, 1.5) }
    }
}

/// Outcome of [`verify_derived_brackets`].
#[derive(Clone, Debug)]
pub struct KernelReport {
    pub variant: KernelVariant,
    pub samples: usize,
    /// Largest relative error of each composite bracket against its stated form.
    pub pair_errors: Vec<(FieldPair, f64)>,
    /// Largest `|K(λ) + K(-λ)|` relative to `|K(λ)|`, over `A` and `B`.
    pub antisymmetry: f64,
}

impl KernelReport {
    pub fn max_error(&self) -> f64 {
        self.pair_errors.iter().map(|(_, e)| *e).fold(0.0, f64::max)
    }
}

/// Compare the composite brackets built from `A`, `B`, `X`, `Y` with the
/// stated kernels at random `(λ, hbar, eta)`, and check antisymmetry of the
/// generating kernels.
pub fn verify_derived_brackets(
    ks: &KernelSet,
    domain: KernelDomain,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<KernelReport, KernelError> {
    let mut pair_errors: Vec<(FieldPair, f64)> = FieldPair::ALL.iter().map(|p| (*p, 0.0)).collect();
    let mut antisymmetry: f64 = 0.0;
    for _ in 0..samples {
        let hbar = rng.gen_range(domain.hbar.0..domain.hbar.1);
        let eta = rng.gen_range(domain.eta.0..domain.eta.1);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let l = sign * rng.gen_range(domain.lambda.0..domain.lambda.1);
        let env = ks.env(hbar, eta);
        for (pair, worst) in pair_errors.iter_mut() {
            let err = rel_error(ks.derived(*pair, &env, l)?, ks.stated(*pair, &env, l)?);
            *worst = worst.max(err);
        }
        for k in [&ks.a, &ks.b] {
            let plus = ks.eval(k, &env, l)?;
            let minus = ks.eval(k, &env, -l)?;
            antisymmetry = antisymmetry.max((plus + minus).norm() / plus.norm().max(1.0));
        }
    }
    Ok(KernelReport { variant: ks.variant, samples, pair_errors, antisymmetry })
}
