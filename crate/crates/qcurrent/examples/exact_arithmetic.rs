//! Rational functions, truncated series and randomized identity tests.
//!
//! ```text
//! cargo run --example exact_arithmetic
//! ```

use std::error::Error;

use num_complex::Complex64;
use qcurrent::exact::{rand_ident_test, rat, GeomBracket, RatFunc, SampleDomain, Sampler, TruncSeries};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn Error>> {
    let x = RatFunc::var("x");
    let one = RatFunc::one();

    // Canonical forms cancel common factors.
    let q = (&(&x * &x) - &one).div(&(&x - &one))?;
    println!("(x^2 - 1) / (x - 1) = {q}");

    let geometric = one.div(&(&one - &x))?;
    println!("1 / (1 - x) = {}", TruncSeries::expand(&geometric, "x", 6)?);

    // exp(-sum_k (1 + (-1/q)^k) x^k / k) with q = s^2 has the closed form (1 - x)(1 + x/q).
    let s = RatFunc::var("s");
    let bracket = GeomBracket::new(vec![(rat(-1, 1), one.clone()), (rat(-1, 1), -&s.powi(-2)?)]);
    let closed = bracket.closed_form().expect("integer weights").to_ratfunc("x")?;
    println!("closed form: {closed}");
    let agree = TruncSeries::expand(&closed, "x", 24)? == bracket.contraction_series("x", 24)?;
    println!("closed form equals the series to order 24: {agree}");

    // sin^2 + cos^2 = 1 on random complex points.
    let domain = SampleDomain::new().with("z", Sampler::default_complex());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let out = rand_ident_test(
        |p| Ok(p["z"].sin().powi(2) + p["z"].cos().powi(2)),
        |_| Ok(Complex64::new(1.0, 0.0)),
        &domain,
        50,
        &mut rng,
    )?;
    println!("sin^2 + cos^2 = 1: max error {:.2e} over {} samples", out.max_error, out.samples);
    Ok(())
}
