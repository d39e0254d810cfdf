use std::f64::consts::PI;

use num_complex::Complex64;
use quadrature::double_exponential::integrate;

/// Radius of the small circle around the origin.
pub const KEYHOLE_RADIUS: f64 = 1e-3;

/// A contour integral with its quadrature error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pairing {
    pub value: Complex64,
    pub error_estimate: f64,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum PairingError {
    #[error("integrand does not decay along the positive axis (|λ f(λ)| = {magnitude:.3e} at λ = {at})")]
    NonConvergentTail { at: f64, magnitude: f64 },
    #[error("integrand is not finite at λ = {0}")]
    NotFinite(Complex64),
}

fn integrate_complex(f: impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> (Complex64, f64) {
    let re = integrate(|t| f(t).re, a, b, tol);
    let im = integrate(|t| f(t).im, a, b, tol);
    (Complex64::new(re.integral, im.integral), re.error_estimate + im.error_estimate)
}

fn check_tail(f: &impl Fn(Complex64) -> Complex64) -> Result<(), PairingError> {
    let probe = |x: f64| (f(Complex64::new(x, 0.0)) * x).norm();
    let (near, far) = (probe(1e3), probe(2e3));
    if far.is_nan() {
        return Err(PairingError::NotFinite(Complex64::new(2e3, 0.0)));
    }
    if far > 1e-12 && far >= 0.75 * near {
        return Err(PairingError::NonConvergentTail { at: 2e3, magnitude: far });
    }
    Ok(())
}

/// `∫_C dλ ln(-λ)/(2πi) f(λ)` over a keyhole around the positive axis.
///
/// The contour comes in from `+∞` above the axis, circles the origin
/// counterclockwise at radius `eps`, and leaves below the axis. On the rays
/// `ln(-λ) = ln λ ∓ iπ`, so together they give `∫_eps^∞ f`; on the circle
/// `λ = eps e^{iθ}` and `ln(-λ) = ln eps + i(θ - π)`.
pub fn keyhole_integral(
    f: impl Fn(Complex64) -> Complex64,
    eps: f64,
    tol: f64,
) -> Result<Pairing, PairingError> {
    check_tail(&f)?;
    let fr = |x: f64| f(Complex64::new(x, 0.0));
    let (near, e1) = integrate_complex(fr, eps, 1.0, tol);
    // `λ = 1/t` maps the tail onto (0, 1].
    let (far, e2) = integrate_complex(|t| if t <= 0.0 { Complex64::new(0.0, 0.0) } else { fr(1.0 / t) / (t * t) }, 0.0, 1.0, tol);
    let circle = |theta: f64| {
        let lam = Complex64::from_polar(eps, theta);
        let log = Complex64::new(eps.ln(), theta - PI);
        log / Complex64::new(0.0, 2.0 * PI) * f(lam) * Complex64::new(0.0, 1.0) * lam
    };
    let (ring, e3) = integrate_complex(circle, 0.0, 2.0 * PI, tol);
    let value = near + far + ring;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(PairingError::NotFinite(value));
    }
    Ok(Pairing { value, error_estimate: e1 + e2 + e3 })
}

/// `⟨v_f | v_g⟩ = ∫_C dλ ln(-λ)/(2πi) f(λ) x(λ) g(-λ)`.
pub fn pairing_regularized(
    f: impl Fn(Complex64) -> Complex64,
    g: impl Fn(Complex64) -> Complex64,
    kernel: impl Fn(Complex64) -> Complex64,
    tol: f64,
) -> Result<Pairing, PairingError> {
    keyhole_integral(|l| f(l) * kernel(l) * g(-l), KEYHOLE_RADIUS, tol)
}
