//! Complex log-Γ and the two contour integrals that drive continuum contractions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::fock::{keyhole_integral, Pairing, PairingError, KEYHOLE_RADIUS};
pub use crate::symexpr::EULER_GAMMA;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `B_{2k} / (2k (2k - 1))` for `k = 1..=7`.
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `ln Γ(z)` by the Lanczos approximation, reflected into `Re z >= 1/2`.
///
/// The imaginary part is continuous on the right half-plane; elsewhere it is
/// correct modulo `2πi`, which is harmless once exponentiated.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        return c(PI.ln()) - (z * PI).sin().ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut acc = c(LANCZOS[0]);
    for (k, p) in LANCZOS.iter().enumerate().skip(1) {
        acc += *p / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    c(0.5 * (2.0 * PI).ln()) + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `ln Γ(z)` by `shifts` steps of the recurrence followed by the Stirling
/// series at `z + shifts`. The result converges as `shifts` grows, which is
/// what the truncation-drift checks measure.
pub fn ln_gamma_shifted(z: Complex64, shifts: usize) -> Complex64 {
    let w = z + shifts as f64;
    let mut acc = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut pow = inv;
    for coef in STIRLING {
        acc += pow * coef;
        pow *= inv2;
    }
    for k in 0..shifts {
        acc -= (z + k as f64).ln();
    }
    acc
}

/// `∫_C dλ ln(-λ)/(2πiλ) e^{-xλ} = -ln x - γE`.
pub fn log_integral(x: Complex64) -> Complex64 {
    -x.ln() - EULER_GAMMA
}

/// `∫_C dλ ln(-λ)/(2πiλ) e^{-xλ}/(1 - e^{-λ/η})` in closed form, with `ln Γ`
/// from [`ln_gamma_shifted`].
pub fn gamma_integral(x: Complex64, eta: f64, shifts: usize) -> Complex64 {
    let y = x * eta;
    ln_gamma_shifted(y, shifts) + (y - 0.5) * (EULER_GAMMA - eta.ln()) - 0.5 * (2.0 * PI).ln()
}

/// The same integral by keyhole quadrature.
pub fn gamma_integral_quadrature(x: Complex64, eta: f64, tol: f64) -> Result<Pairing, PairingError> {
    keyhole_integral(|l| (-x * l).exp() / (l * (1.0 - (-l / eta).exp())), KEYHOLE_RADIUS, tol)
}

/// [`log_integral`] by keyhole quadrature.
pub fn log_integral_quadrature(x: Complex64, tol: f64) -> Result<Pairing, PairingError> {
    keyhole_integral(|l| (-x * l).exp() / l, KEYHOLE_RADIUS, tol)
}

/// Worst errors found by [`verify_gamma_identities`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaIdentityReport {
    pub samples: usize,
    /// Closed form against keyhole quadrature.
    pub quadrature: f64,
    /// `Γ(z) Γ(1 - z) = π / sin(πz)`.
    pub reflection: f64,
    /// [`ln_gamma_shifted`] against [`ln_gamma`], modulo `2πi`.
    pub stirling: f64,
}

/// Sample `x` with `Re x ∈ [0.2, 3]`, `|Im x| ≤ 1` and `eta ∈ [0.3, 2]`.
pub fn verify_gamma_identities(
    samples: usize,
    quad_tol: f64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<GammaIdentityReport, PairingError> {
    use rand::Rng;
    let mut report = GammaIdentityReport { samples, quadrature: 0.0, reflection: 0.0, stirling: 0.0 };
    for _ in 0..samples {
        let x = Complex64::new(rng.gen_range(0.2..3.0), rng.gen_range(-1.0..1.0));
        let eta = rng.gen_range(0.3..2.0);
        let quad = gamma_integral_quadrature(x, eta, quad_tol)?;
        let closed = gamma_integral(x, eta, 40);
        report.quadrature = report.quadrature.max((quad.value - closed).norm() / closed.norm().max(1.0));
        let z = Complex64::new(rng.gen_range(0.05..0.95), rng.gen_range(-0.5..0.5));
        let lhs = (ln_gamma(z) + ln_gamma(1.0 - z)).exp();
        let rhs = PI / (z * PI).sin();
        report.reflection = report.reflection.max((lhs - rhs).norm() / rhs.norm());
        let d = ln_gamma_shifted(x, 40) - ln_gamma(x);
        let wrapped = Complex64::new(d.re, d.im - 2.0 * PI * (d.im / (2.0 * PI)).round());
        report.stirling = report.stirling.max(wrapped.norm());
    }
    Ok(report)
}
