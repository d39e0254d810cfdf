//! Parsing, evaluating and converting scalar expressions.
//!
//! ```text
//! cargo run --example symbolic_expressions
//! ```

use std::collections::BTreeMap;
use std::error::Error;

use num_complex::Complex64;
use qcurrent::dsl::parse_expr;
use qcurrent::exact::Point;
use qcurrent::symexpr::{ParamEnv, SymExpr};

fn main() -> Result<(), Box<dyn Error>> {
    let f = parse_expr("cosh(pi*eta*(u - v + i*hbar)) / cosh(pi*eta*(u - v - i*hbar))", &["eta", "hbar"], &["u", "v"])?;
    println!("f = {f}");
    println!("free variables {:?}, parameters {:?}", f.free_vars(), f.free_params());

    let env = ParamEnv::new().set("eta", 1.0).set("hbar", 0.2);
    let point: Point = [("u".to_string(), Complex64::new(0.4, 0.0)), ("v".to_string(), Complex64::new(0.0, 0.0))].into();
    println!("f(0.4, 0) = {:.12}", f.eval(&env, &point)?);

    // f(u, v) f(v, u) = 1.
    let swap = BTreeMap::from([("u".to_string(), "v".to_string()), ("v".to_string(), "u".to_string())]);
    let product = SymExpr::mul(f.clone(), f.rename_vars(&swap));
    println!("f(u, v) f(v, u) = {:.12}", product.eval(&env, &point)?);

    // Derived parameters are resolved in order.
    let env = ParamEnv::new().set("hbar", 0.25).derive("q", parse_expr("exp(2*pi*i*hbar)", &["hbar"], &[])?).resolve()?;
    println!("q at hbar = 1/4: {:.12}", env.get("q").unwrap());

    // Rational expressions convert to exact rational functions.
    let g = parse_expr("(z^2 - w^2) / (z - w)", &[], &["z", "w"])?;
    println!("{g} = {}", g.to_ratfunc(&BTreeMap::new())?);
    Ok(())
}
