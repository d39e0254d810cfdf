//! Oscillator brackets, zero-mode reordering, the regularized pairing and
//! Wick sums.
//!
//! ```text
//! cargo run --example fock_space
//! ```

use std::error::Error;

use num_complex::Complex64;
use qcurrent::exact::{rat, GeomBracket, RatFunc};
use qcurrent::fock::{
    keyhole_integral, vacuum_expectation, wick_sum, zero_mode_reorder, DiscreteModes, Ladder, ZeroCoef,
    ZeroExponent, KEYHOLE_RADIUS,
};

fn main() -> Result<(), Box<dyn Error>> {
    let q = RatFunc::var("q");
    let cross = GeomBracket::new(vec![(rat(1, 1), q.clone()), (rat(1, 1), q.inv()?)]);
    let modes = DiscreteModes::new()
        .family("a")
        .family("b")
        .zero_pair("Pa", "Qa")
        .bracket_of("a", "b", cross.clone())
        .bracket_of("b", "a", cross);
    for n in 1..=3 {
        println!("[a_{n}, b_-{n}] = {}", modes.bracket("a", n, "b", -n)?);
    }

    // e^{ln(z) Pa} e^{2 Qa} = z^2 e^{2 Qa} e^{ln(z) Pa}
    let mut p = ZeroExponent::default();
    p.p.insert("Pa".into(), ZeroCoef::log("z"));
    let mut shift = ZeroExponent::default();
    shift.q.insert("Qa".into(), RatFunc::from_int(2));
    let pairs = vec![("Pa".to_string(), "Qa".to_string())];
    println!("zero-mode reordering scalar: {}", zero_mode_reorder(&p, &shift, &pairs)?);

    let kernel = |l: Complex64| -(-2.0 * l).exp() / l;
    let pairing = keyhole_integral(kernel, KEYHOLE_RADIUS, 1e-12)?;
    println!("regularized pairing of -exp(-2l)/l: {:.12} (gamma + ln 2 = {:.12})", pairing.value.re, 0.577_215_664_901_532_9 + 2f64.ln());

    let g = vec![
        vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.5)],
        vec![Complex64::new(-1.0, 0.0), Complex64::new(3.0, 0.0)],
    ];
    let ops = [Ladder::Down(1), Ladder::Down(0), Ladder::Up(0), Ladder::Up(1)];
    println!("bosonic <b1 b0 b0* b1*> = {} (matching sum {})", vacuum_expectation(&ops, &g, false), wick_sum(&g, false));
    println!("fermionic <b1 b0 b0* b1*> = {} (matching sum {})", vacuum_expectation(&ops, &g, true), wick_sum(&g, true));
    Ok(())
}
