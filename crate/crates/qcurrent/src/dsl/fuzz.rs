//! Random well-formed algebra sources for round-trip testing.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const PARAMS: &[&str] = &["a", "b", "k"];
const NAMES: &[&str] = &["A", "B", "J", "K", "T"];

fn atom(rng: &mut ChaCha8Rng, vars: &[&str]) -> String {
    match rng.gen_range(0..5) {
        0 => format!("{}", rng.gen_range(1..7)),
        1 => format!("{}/{}", rng.gen_range(1..5), rng.gen_range(2..6)),
        2 => PARAMS.choose(rng).unwrap().to_string(),
        3 if !vars.is_empty() => vars.choose(rng).unwrap().to_string(),
        _ => "i*pi".to_string(),
    }
}

/// A random expression in `vars` and the declared parameters.
fn expr(rng: &mut ChaCha8Rng, vars: &[&str], depth: u32) -> String {
    if depth == 0 {
        return atom(rng, vars);
    }
    let a = expr(rng, vars, depth - 1);
    let b = expr(rng, vars, depth - 1);
    match rng.gen_range(0..8) {
        0 => format!("{a} + {b}"),
        1 => format!("({a}) - ({b})"),
        2 => format!("({a})*({b})"),
        3 => format!("({a})/(1 + ({b})^2)"),
        4 => format!("-({a})"),
        5 => format!("({a})^{}", rng.gen_range(-2..4)),
        6 => format!("exp({a})"),
        _ => format!("cosh({a})"),
    }
}

/// `g(u - v)/g(v - u)`, so that reading the relation backwards gives the reciprocal.
fn reciprocal_factor(rng: &mut ChaCha8Rng, u: &str, v: &str) -> String {
    let shift = atom(rng, &[]);
    let scale = PARAMS.choose(rng).unwrap();
    let f = ["cosh", "sinh", "exp"].choose(rng).unwrap();
    format!("{f}(({scale})*({u} - {v} + i*({shift})))/{f}(({scale})*({v} - {u} + i*({shift})))")
}

/// A source text that parses, passes the load checks, and exercises
/// groups, `±` templates, brackets and derived parameters.
pub fn random_spec_source(rng: &mut ChaCha8Rng) -> String {
    let mut out = String::new();
    let n = rng.gen_range(2..=4);
    let mut currents: Vec<(String, bool)> = Vec::new();
    let mut families: Vec<&str> = NAMES.to_vec();
    families.shuffle(rng);
    let signed = rng.gen_bool(0.5);
    for name in families.iter().take(n) {
        currents.push((name.to_string(), rng.gen_bool(0.5)));
    }
    let spectral = if rng.gen_bool(0.5) { "additive" } else { "multiplicative" };
    out.push_str(&format!("algebra fuzz{} {{\n  spectral {spectral};\n", rng.gen_range(0..1000)));
    out.push_str("  param a, b;\n  central k;\n");
    if rng.gen_bool(0.5) {
        out.push_str(&format!("  param a' := {};\n", expr(rng, &[], 2)));
    }
    for (name, odd) in &currents {
        out.push_str(&format!("  current {name}(u) {};\n", if *odd { "odd" } else { "even" }));
    }
    if signed {
        out.push_str("  current S+(u) even;\n  current S-(u) even;\n");
    }
    let sign = |x: bool, y: bool| if x && y { "-" } else { "" };
    for (name, odd) in &currents {
        if rng.gen_bool(0.7) {
            let f = reciprocal_factor(rng, "u", "v");
            out.push_str(&format!("  {name}(u) {name}(v) = {}{f} {name}(v) {name}(u);\n", sign(*odd, *odd)));
        }
    }
    if signed {
        let f = reciprocal_factor(rng, "u", "v");
        out.push_str(&format!("  S±(u) S±(v) = {f} * exp(0*(u ± v)) S±(v) S±(u);\n"));
    }
    let mut pairs = Vec::new();
    for i in 0..currents.len() {
        for j in 0..currents.len() {
            if i < j && rng.gen_bool(0.4) {
                pairs.push((i, j));
            }
        }
    }
    if !pairs.is_empty() {
        out.push_str("  group {\n");
        for (i, j) in pairs {
            let (x, ox) = &currents[i];
            let (y, oy) = &currents[j];
            let f = expr(rng, &["u", "v"], 2);
            out.push_str(&format!("    {x}(u) {y}(v) = {}({f}) {y}(v) {x}(u);\n", sign(*ox, *oy)));
        }
        out.push_str("  }\n");
    }
    if rng.gen_bool(0.6) {
        let (x, _) = currents.choose(rng).unwrap().clone();
        let (y, _) = currents.choose(rng).unwrap().clone();
        let (t, _) = currents.choose(rng).unwrap().clone();
        let kind = if spectral == "additive" { "delta_add" } else { "delta_mult" };
        let c1 = expr(rng, &["u", "v"], 1);
        let c2 = expr(rng, &["u", "v"], 1);
        out.push_str(&format!(
            "  bracket {x}(u) {y}(v) = ({c1})*{kind}(u - v + {}) {t}(u) - ({c2})*{kind}(u - v) {t}(v + 1);\n",
            atom(rng, &[])
        ));
    }
    out.push_str("}\n");
    out
}
