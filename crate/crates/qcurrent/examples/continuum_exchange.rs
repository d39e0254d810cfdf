//! Gamma-function contractions of the continuum realizations and their
//! exchange relations.
//!
//! ```text
//! cargo run --example continuum_exchange
//! ```

use std::error::Error;

use num_complex::Complex64;
use qcurrent::continuum::{
    gamma_integral, gamma_integral_quadrature, verify_continuum_exchange, verify_derived_brackets, ContinuumRep,
    ExchangeDomain, ExchangePoint, KernelDomain, KernelSet, KernelVariant, Orientation, DEFAULT_SHIFTS,
};
use qcurrent::dsl::{parse_spec, DEF1_SOURCE, UQ_SOURCE};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXCHANGE_TOL: f64 = 1e-8;

fn main() -> Result<(), Box<dyn Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    for variant in [KernelVariant::HbarEta, KernelVariant::GammaSqrtQ] {
        let report = verify_derived_brackets(&KernelSet::new(variant), KernelDomain::default(), 200, &mut rng)?;
        println!("{} kernels: derived brackets agree to {:.2e}", variant.name(), report.max_error());
    }

    let x = Complex64::new(1.3, 0.4);
    let closed = gamma_integral(x, 0.8, DEFAULT_SHIFTS);
    let quad = gamma_integral_quadrature(x, 0.8, 1e-10)?;
    println!("regularized Gamma integral at {x}: {closed:.10} (quadrature {:.10})", quad.value);

    let level_one = ContinuumRep::level_one(Orientation::Flipped);
    let pt = ExchangePoint { hbar: 0.2, eta: 1.0, u: 0.4, v: 0.0 };
    println!("E(u) E(v) exchange ratio at u - v = 0.4: {:.12}", level_one.exchange_ratio("E", "E", pt, DEFAULT_SHIFTS)?);

    for (rep, alg) in [
        (level_one, parse_spec(DEF1_SOURCE)?),
        (ContinuumRep::gamma_sqrt_q(Orientation::Flipped), parse_spec(UQ_SOURCE)?),
    ] {
        let names = rep.coordinates.current_names();
        for x in names {
            for y in names.into_iter().filter(|y| alg.exchange(x, y).is_some()) {
                let r = verify_continuum_exchange(&rep, &alg, x, y, ExchangeDomain::default(), 20, EXCHANGE_TOL, &mut rng)?;
                println!(
                    "{} {x}{y}: {} max error {:.2e} at recurrence depth {}",
                    rep.name,
                    if r.passes(EXCHANGE_TOL) { "pass" } else { "FAIL" },
                    r.max_error,
                    r.shifts
                );
            }
        }
    }
    Ok(())
}
