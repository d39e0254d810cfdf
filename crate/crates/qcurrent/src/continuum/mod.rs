//! Continuum free-field realizations: contour-regularized contractions,
//! kernel identities and numeric exchange checks.

mod gamma;
mod kernels;
mod rep;

pub use gamma::{
    gamma_integral, gamma_integral_quadrature, ln_gamma, ln_gamma_shifted, log_integral, log_integral_quadrature,
    verify_gamma_identities, GammaIdentityReport,
    EULER_GAMMA,
};
pub use kernels::{verify_derived_brackets, FieldPair, KernelDomain, KernelError, KernelReport, KernelSet, KernelVariant};
pub use rep::{
    check_domain, eta_invariance, verify_continuum_exchange, ContinuumError, ContinuumExchangeCheck, ContinuumRep,
    ContinuumVertex, Coordinates, ExchangeDomain, ExchangePoint, Field, GammaContraction, GammaTerm, Insertion,
    Orientation, DEFAULT_SHIFTS, MAX_SHIFTS, SHIFT_PROBE,
};
