//! Continuum free-boson realizations and their exchange ratios.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::gamma::{gamma_integral, log_integral};
use super::kernels::{FieldPair, KernelSet, KernelVariant};
use crate::dsl::{eval_at, AlgebraSpec};
use crate::exact::{rel_error, EvalFailure, Point};

/// Number of `ln Γ` recurrence steps used before the first drift check.
pub const DEFAULT_SHIFTS: usize = 10;
/// Largest recurrence depth tried when the drift check fails.
pub const MAX_SHIFTS: usize = 640;
/// Increment whose effect must stay below a tenth of the tolerance.
pub const SHIFT_PROBE: usize = 10;

/// One term of a regularized contraction in the variable `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GammaTerm {
    /// `weight * (-ln(x + offset) - γE)`.
    Log { weight: f64, offset: f64 },
    /// `weight * G_eta(x + offset)`, the closed form of the `Γ` contour integral.
    Gamma { weight: f64, offset: f64, eta: f64 },
}

/// `⟨f(u) g(v)⟩` as a sum of [`GammaTerm`]s in `x = ±i(u - v)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GammaContraction {
    pub terms: Vec<GammaTerm>,
}

impl GammaContraction {
    /// Contraction of the composite fields for one kernel variant.
    pub fn of_fields(ks: &KernelSet, pair: FieldPair, hbar: f64, eta: f64) -> Self {
        use GammaTerm::*;
        let ep = ks.eta_prime(hbar, eta);
        let terms = match pair {
            FieldPair::AA => {
                let o = 0.5 / eta;
                vec![
                    Log { weight: -1.0, offset: 0.0 },
                    Gamma { weight: -1.0, offset: o - hbar, eta },
                    Gamma { weight: 1.0, offset: o + hbar, eta },
                ]
            }
            FieldPair::BB => {
                let o = 0.5 / ep;
                vec![
                    Log { weight: -1.0, offset: 0.0 },
                    Gamma { weight: 1.0, offset: o - hbar, eta: ep },
                    Gamma { weight: -1.0, offset: o + hbar, eta: ep },
                ]
            }
            FieldPair::AB | FieldPair::BA => vec![
                Log { weight: 1.0, offset: -0.5 * hbar },
                Log { weight: 1.0, offset: 0.5 * hbar },
            ],
        };
        GammaContraction { terms }
    }

    pub fn eval(&self, x: Complex64, shifts: usize) -> Complex64 {
        self.terms
            .iter()
            .map(|t| match *t {
                GammaTerm::Log { weight, offset } => weight * log_integral(x + offset),
                GammaTerm::Gamma { weight, offset, eta } => weight * gamma_integral(x + offset, eta, shifts),
            })
            .sum()
    }
}

/// Orientation of the Fourier transform defining the fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Orientation {
    /// `φ(u) = ∫ dλ e^{iλu} a(λ)`.
    AsWritten,
    /// `φ(u) = ∫ dλ e^{-iλu} a(λ)`.
    Flipped,
}

impl Orientation {
    fn sign(self) -> f64 {
        match self {
            Orientation::AsWritten => -1.0,
            Orientation::Flipped => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    A,
    B,
}

/// `coef * field(u + shift * i * hbar)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Insertion {
    pub field: Field,
    pub coef: f64,
    /// Imaginary rapidity shift in units of `hbar`.
    pub shift: f64,
}

/// A normal-ordered exponential of zero modes and continuum fields.
/// Zero-mode coefficients are indexed `[alpha, beta]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuumVertex {
    pub label: String,
    pub fields: Vec<Insertion>,
    pub p: [Complex64; 2],
    pub q: [Complex64; 2],
}

/// How target structure functions see the rapidities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coordinates {
    /// `u`, `v` directly, with central charge `c = 1`.
    Rapidity,
    /// `z = e^{2π eta u}`, `q = e^{2π i eta hbar}`, `gamma = q^{1/2}`.
    Multiplicative,
}

impl Coordinates {
    /// Raising, lowering and the two Cartan currents, in that order.
    pub fn current_names(self) -> [&'static str; 4] {
        match self {
            Coordinates::Rapidity => ["E", "F", "H+", "H-"],
            Coordinates::Multiplicative => ["X+", "X-", "psi+", "psi-"],
        }
    }
}

#[derive(Clone, Debug)]
pub struct ContinuumRep {
    pub name: String,
    pub kernels: KernelSet,
    pub orientation: Orientation,
    pub coordinates: Coordinates,
    pub vertices: BTreeMap<String, ContinuumVertex>,
}

#[derive(Debug, thiserror::Error)]
pub enum ContinuumError {
    #[error("parameters outside 0 < hbar < 1/(2 eta): hbar = {hbar}, eta = {eta}")]
    Domain { hbar: f64, eta: f64 },
    #[error("`{0}` is not realized")]
    Unrealized(String),
    #[error("no exchange relation for {0}{1}")]
    NoRelation(String, String),
    #[error("target evaluation failed: {0}")]
    Target(String),
}

impl From<EvalFailure> for ContinuumError {
    fn from(e: EvalFailure) -> Self {
        ContinuumError::Target(format!("{e:?}"))
    }
}

fn ins(field: Field, shift: f64) -> Insertion {
    Insertion { field, coef: 1.0, shift }
}

fn i(v: f64) -> Complex64 {
    Complex64::new(0.0, v)
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// The raising, lowering and two Cartan vertices shared by both
/// realizations, with zero-mode momenta `p_alpha`, `p_beta`.
fn vertex_table(names: [&str; 4], p_alpha: f64, p_beta: f64) -> BTreeMap<String, ContinuumVertex> {
    let q1 = [re(p_alpha), re(p_beta)];
    let q2 = [re(2.0 * p_alpha), re(2.0 * p_beta)];
    let half = PI / 2.0;
    let make = |label: &str, fields, p, q| ContinuumVertex { label: label.to_string(), fields, p, q };
    let list = [
        make(names[0], vec![ins(Field::A, 0.0)], [i(half / p_alpha), i(half / p_beta)], q1),
        make(names[1], vec![ins(Field::B, 0.0)], [i(half / p_alpha), i(-half / p_beta)], q1),
        make(names[2], vec![ins(Field::A, 0.25), ins(Field::B, -0.25)], [i(PI / p_alpha), re(0.0)], q2),
        make(names[3], vec![ins(Field::A, -0.25), ins(Field::B, 0.25)], [i(PI / p_alpha), re(0.0)], q2),
    ];
    list.into_iter().map(|v| (v.label.clone(), v)).collect()
}

/// Sampled deformation parameters and rapidities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExchangePoint {
    pub hbar: f64,
    pub eta: f64,
    pub u: f64,
    pub v: f64,
}

impl ContinuumRep {
    /// The level-one realization of the two-parameter current algebra.
    pub fn level_one(orientation: Orientation) -> Self {
        ContinuumRep {
            name: "c1".into(),
            kernels: KernelSet::new(KernelVariant::HbarEta),
            orientation,
            coordinates: Coordinates::Rapidity,
            vertices: vertex_table(Coordinates::Rapidity.current_names(), 1.0, 1.0),
        }
    }

    /// The realization of the multiplicative currents at `gamma = q^{1/2}`.
    pub fn gamma_sqrt_q(orientation: Orientation) -> Self {
        ContinuumRep {
            name: "gamma_sqrt_q".into(),
            kernels: KernelSet::new(KernelVariant::GammaSqrtQ),
            orientation,
            coordinates: Coordinates::Multiplicative,
            vertices: vertex_table(Coordinates::Multiplicative.current_names(), 1.0, 1.0),
        }
    }

    /// Rebuild the vertices with zero-mode momenta `p_alpha`, `p_beta`.
    pub fn with_momenta(mut self, p_alpha: f64, p_beta: f64) -> Self {
        self.vertices = vertex_table(self.coordinates.current_names(), p_alpha, p_beta);
        self
    }

    pub fn vertex(&self, name: &str) -> Result<&ContinuumVertex, ContinuumError> {
        self.vertices.get(name).ok_or_else(|| ContinuumError::Unrealized(name.to_string()))
    }

    /// `ln` of the scalar in `V1(u) V2(v) = scalar :V1(u) V2(v):`.
    pub fn log_contraction(
        &self,
        v1: &ContinuumVertex,
        u: f64,
        v2: &ContinuumVertex,
        v: f64,
        hbar: f64,
        eta: f64,
        shifts: usize,
    ) -> Complex64 {
        let mut acc: Complex64 = (0..2).map(|k| v1.p[k] * v2.q[k]).sum();
        let sigma = self.orientation.sign();
        for f in &v1.fields {
            for g in &v2.fields {
                let pair = match (f.field, g.field) {
                    (Field::A, Field::A) => FieldPair::AA,
                    (Field::B, Field::B) => FieldPair::BB,
                    (Field::A, Field::B) => FieldPair::AB,
                    (Field::B, Field::A) => FieldPair::BA,
                };
                // u + i hbar s_f - (v + i hbar s_g), times sigma * i.
                let x = i(sigma) * Complex64::new(u - v, hbar * (f.shift - g.shift));
                let w = GammaContraction::of_fields(&self.kernels, pair, hbar, eta);
                acc += f.coef * g.coef * w.eval(x, shifts);
            }
        }
        acc
    }

    /// `V_x(u) V_y(v) / (V_y(v) V_x(u))` as a number.
    pub fn exchange_ratio(&self, x: &str, y: &str, pt: ExchangePoint, shifts: usize) -> Result<Complex64, ContinuumError> {
        let (a, b) = (self.vertex(x)?, self.vertex(y)?);
        let fwd = self.log_contraction(a, pt.u, b, pt.v, pt.hbar, pt.eta, shifts);
        let back = self.log_contraction(b, pt.v, a, pt.u, pt.hbar, pt.eta, shifts);
        Ok((fwd - back).exp())
    }

    /// Parameter and variable values under which the target algebra's
    /// structure functions are evaluated.
    pub fn target_point(&self, pt: ExchangePoint, u_name: &str, v_name: &str) -> Point {
        let mut p = Point::new();
        match self.coordinates {
            Coordinates::Rapidity => {
                p.insert("eta".into(), re(pt.eta));
                p.insert("hbar".into(), re(pt.hbar));
                p.insert("c".into(), re(1.0));
                p.insert(u_name.into(), re(pt.u));
                p.insert(v_name.into(), re(pt.v));
            }
            Coordinates::Multiplicative => {
                let q = i(2.0 * PI * pt.eta * pt.hbar).exp();
                p.insert("q".into(), q);
                p.insert("gamma".into(), q.sqrt());
                p.insert(u_name.into(), re((2.0 * PI * pt.eta * pt.u).exp()));
                p.insert(v_name.into(), re((2.0 * PI * pt.eta * pt.v).exp()));
            }
        }
        p
    }
}

/// Sampling ranges for continuum exchange checks. `hbar` is drawn as a
/// fraction of its upper bound `1/(2 eta)`. `shifts` is the `ln Γ`
/// recurrence depth the convergence loop starts from.
#[derive(Clone, Copy, Debug)]
pub struct ExchangeDomain {
    pub eta: (f64, f64),
    pub hbar_fraction: (f64, f64),
    pub rapidity: (f64, f64),
    pub min_separation: f64,
    pub shifts: usize,
}

impl Default for ExchangeDomain {
    fn default() -> Self {
        ExchangeDomain { eta: (0.3, 1.2), hbar_fraction: (0.05, 0.9), rapidity: (-1.0, 1.0), min_separation: 0.05, shifts: DEFAULT_SHIFTS }
    }
}

impl ExchangeDomain {
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> ExchangePoint {
        let eta = rng.gen_range(self.eta.0..self.eta.1);
        let hbar = rng.gen_range(self.hbar_fraction.0..self.hbar_fraction.1) / (2.0 * eta);
        loop {
            let u = rng.gen_range(self.rapidity.0..self.rapidity.1);
            let v = rng.gen_range(self.rapidity.0..self.rapidity.1);
            if (u - v).abs() >= self.min_separation {
                return ExchangePoint { hbar, eta, u, v };
            }
        }
    }
}

pub fn check_domain(pt: &ExchangePoint) -> Result<(), ContinuumError> {
    if pt.hbar > 0.0 && pt.eta > 0.0 && pt.hbar < 0.5 / pt.eta {
        Ok(())
    } else {
        Err(ContinuumError::Domain { hbar: pt.hbar, eta: pt.eta })
    }
}

#[derive(Clone, Debug)]
pub struct ContinuumExchangeCheck {
    pub left: String,
    pub right: String,
    pub samples: usize,
    pub max_error: f64,
    /// Largest change of the ratio when the `ln Γ` recurrence depth grows by [`SHIFT_PROBE`].
    pub drift: f64,
    pub shifts: usize,
    pub converged: bool,
}

impl ContinuumExchangeCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.converged && self.max_error <= tol
    }
}

/// Compare `rep`'s exchange ratio for `x`, `y` with the structure function of `alg`.
pub fn verify_continuum_exchange(
    rep: &ContinuumRep,
    alg: &AlgebraSpec,
    x: &str,
    y: &str,
    domain: ExchangeDomain,
    samples: usize,
    tol: f64,
    rng: &mut ChaCha8Rng,
) -> Result<ContinuumExchangeCheck, ContinuumError> {
    let e = alg.exchange(x, y).ok_or_else(|| ContinuumError::NoRelation(x.into(), y.into()))?;
    let (un, vn) = (e.left.var().unwrap_or("u"), e.right.var().unwrap_or("v"));
    let target = e.structure_function();
    let rules = alg.rules();
    let points: Vec<ExchangePoint> = (0..samples).map(|_| domain.draw(rng)).collect();
    let mut shifts = domain.shifts.max(1);
    let (mut drift, mut converged);
    loop {
        drift = 0.0f64;
        for pt in &points {
            check_domain(pt)?;
            let r1 = rep.exchange_ratio(x, y, *pt, shifts)?;
            let r2 = rep.exchange_ratio(x, y, *pt, shifts + SHIFT_PROBE)?;
            drift = drift.max(rel_error(r1, r2));
        }
        converged = drift <= tol / 10.0;
        if converged || shifts * 2 > MAX_SHIFTS {
            break;
        }
        shifts *= 2;
    }
    let mut max_error = 0.0f64;
    for pt in &points {
        let got = rep.exchange_ratio(x, y, *pt, shifts)?;
        let want = eval_at(&target, &rules, &rep.target_point(*pt, un, vn))?;
        max_error = max_error.max(rel_error(got, want));
    }
    Ok(ContinuumExchangeCheck { left: x.into(), right: y.into(), samples, max_error, drift, shifts, converged })
}

/// Largest relative change of the exchange ratio when `eta` is replaced by
/// `eta1` with `z`, `w` and `q` held fixed.
pub fn eta_invariance(
    rep: &ContinuumRep,
    x: &str,
    y: &str,
    domain: ExchangeDomain,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64, ContinuumError> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let pt = domain.draw(rng);
        let eta1 = rng.gen_range(domain.eta.0..domain.eta.1);
        let s = pt.eta / eta1;
        let moved = ExchangePoint { hbar: pt.hbar * s, eta: eta1, u: pt.u * s, v: pt.v * s };
        check_domain(&moved)?;
        let a = rep.exchange_ratio(x, y, pt, domain.shifts)?;
        let b = rep.exchange_ratio(x, y, moved, domain.shifts)?;
        worst = worst.max(rel_error(a, b));
    }
    Ok(worst)
}
