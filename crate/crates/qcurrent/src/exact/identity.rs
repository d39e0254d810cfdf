//! Randomized numerical identity testing for expressions that are not
//! rational (hyperbolic, exponential or Gamma-valued).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Denominators smaller than this at a sample point trigger a redraw.
pub const NEAR_POLE: f64 = 1e-8;

/// Upper bound on redraws per accepted sample.
pub const MAX_REDRAWS: usize = 64;

/// A sample point: variable name to complex value.
pub type Point = BTreeMap<String, Complex64>;

/// How a single coordinate is drawn.
#[derive(Clone, Debug, PartialEq)]
pub enum Sampler {
    /// Uniform modulus in `[min, max]`, uniform argument.
    Annulus { min: f64, max: f64 },
    /// Uniform real value in `[lo, hi]`.
    Real { lo: f64, hi: f64 },
    /// Uniform in a rectangle of the complex plane.
    Box { re: (f64, f64), im: (f64, f64) },
}

impl Sampler {
    /// The default complex sampler with moduli in `[0.3, 3]`.
    pub fn default_complex() -> Self {
        Sampler::Annulus { min: 0.3, max: 3.0 }
    }

    pub fn draw(&self, rng: &mut ChaCha8Rng) -> Complex64 {
        match *self {
            Sampler::Annulus { min, max } => {
                let r = rng.gen_range(min..=max);
                let t = rng.gen_range(0.0..2.0 * PI);
                Complex64::from_polar(r, t)
            }
            Sampler::Real { lo, hi } => Complex64::new(rng.gen_range(lo..=hi), 0.0),
            Sampler::Box { re, im } => {
                Complex64::new(rng.gen_range(re.0..=re.1), rng.gen_range(im.0..=im.1))
            }
        }
    }
}

type Constraint = Box<dyn Fn(&Point) -> bool + Send + Sync>;

/// Independent samplers per variable plus an optional acceptance constraint.
#[derive(Default)]
pub struct SampleDomain {
    vars: Vec<(String, Sampler)>,
    constraint: Option<Constraint>,
}

impl SampleDomain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, sampler: Sampler) -> Self {
        self.vars.push((name.to_string(), sampler));
        self
    }

    pub fn constrain(mut self, pred: impl Fn(&Point) -> bool + Send + Sync + 'static) -> Self {
        self.constraint = Some(Box::new(pred));
        self
    }

    /// Draw a point satisfying the constraint, or `None` after too many tries.
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> Option<Point> {
        for _ in 0..MAX_REDRAWS {
            let p: Point = self.vars.iter().map(|(n, s)| (n.clone(), s.draw(rng))).collect();
            if self.constraint.as_ref().is_none_or(|c| c(&p)) {
                return Some(p);
            }
        }
        None
    }
}

/// Why a side of an identity could not be evaluated at a point.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EvalFailure {
    #[error("near a pole (|denominator| = {0:e})")]
    NearPole(f64),
    #[error("{0}")]
    Other(String),
}

/// Outcome of a randomized comparison.
#[derive(Clone, Debug)]
pub struct IdentityOutcome {
    pub max_error: f64,
    pub samples: usize,
    pub redraws: usize,
    pub worst: Option<Point>,
}

impl IdentityOutcome {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_error <= tol
    }
}

#[derive(Clone, Debug, thiserror::Error)]
pub enum IdentityError {
    #[error("could not draw a point from the sample domain")]
    DomainExhausted,
    #[error("evaluation failed at {point:?}: {reason}")]
    Evaluation { point: Point, reason: String },
    #[error("every redraw landed near a pole; last point {0:?}")]
    PersistentPole(Point),
}

/// Relative discrepancy `|a - b| / max(1, |a|, |b|)`.
pub fn rel_error(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

/// Compare two evaluators on `samples` random points.
///
/// Points where either side reports [`EvalFailure::NearPole`] are redrawn.
/// Any other failure aborts the test and names the offending point.
pub fn rand_ident_test<L, R>(
    lhs: L,
    rhs: R,
    domain: &SampleDomain,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<IdentityOutcome, IdentityError>
where
    L: Fn(&Point) -> Result<Complex64, EvalFailure>,
    R: Fn(&Point) -> Result<Complex64, EvalFailure>,
{
    let mut out = IdentityOutcome { max_error: 0.0, samples: 0, redraws: 0, worst: None };
    while out.samples < samples {
        let mut accepted = None;
        let mut last = None;
        for _ in 0..MAX_REDRAWS {
            let p = domain.draw(rng).ok_or(IdentityError::DomainExhausted)?;
            let pair = lhs(&p).and_then(|a| rhs(&p).map(|b| (a, b)));
            match pair {
                Ok(v) => {
                    accepted = Some((p, v));
                    break;
                }
                Err(EvalFailure::NearPole(_)) => {
                    out.redraws += 1;
                    last = Some(p);
                }
                Err(EvalFailure::Other(reason)) => {
                    return Err(IdentityError::Evaluation { point: p, reason })
                }
            }
        }
        let (p, (a, b)) = match accepted {
            Some(x) => x,
            None => return Err(IdentityError::PersistentPole(last.unwrap_or_default())),
        };
        let e = rel_error(a, b);
        if !(e <= out.max_error) {
            out.max_error = if e.is_nan() { f64::INFINITY } else { e };
            out.worst = Some(p);
        }
        out.samples += 1;
    }
    Ok(out)
}
