use std::fmt::Write;

use crate::continuum::{ContinuumError, ContinuumRep, ExchangePoint, Orientation};
use crate::dsl::{eval_at, parse_document, parse_spec, DslError, DEF1_SOURCE, UQ_SOURCE};
use crate::exact::EvalFailure;
use crate::vertex::{verify_exchange, Factor, Realization, VertexError, RATIO_VAR};

#[derive(Debug, thiserror::Error)]
pub enum OpeError {
    #[error("unknown representation `{0}` (expected gamma_q, gamma_q_amended, c1 or gamma_sqrt_q)")]
    UnknownRep(String),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Vertex(#[from] VertexError),
    #[error(transparent)]
    Continuum(#[from] ContinuumError),
    #[error(transparent)]
    Eval(#[from] EvalFailure),
    #[error(transparent)]
    Exact(#[from] crate::exact::ExactError),
}

/// Reference point at which continuum ratios are printed.
pub const OPE_POINT: ExchangePoint = ExchangePoint { hbar: 0.2, eta: 1.0, u: 0.4, v: 0.0 };

/// Human-readable contraction and exchange ratio of `X`, `Y` in `rep`.
/// For discrete realizations `order` truncates the series expansion of the
/// contraction factor; for continuum ones it is the `ln Γ` recurrence depth.
pub fn describe_ope(rep: &str, x: &str, y: &str, order: usize) -> Result<String, OpeError> {
    match rep {
        "gamma_q" | "gamma_q_amended" => discrete(rep, x, y, order),
        "c1" | "gamma_sqrt_q" => continuum(rep, x, y, order),
        other => Err(OpeError::UnknownRep(other.to_string())),
    }
}

fn discrete(rep: &str, x: &str, y: &str, order: usize) -> Result<String, OpeError> {
    let doc = parse_document(UQ_SOURCE)?;
    let spec = doc.realizations.iter().find(|r| r.name == rep).ok_or_else(|| OpeError::UnknownRep(rep.into()))?;
    let real = Realization::from_spec(spec)?.with_series_order(order);
    let (u, v) = match doc.algebra.exchange(x, y) {
        Some(e) => (e.left.var().unwrap_or("z").to_string(), e.right.var().unwrap_or("w").to_string()),
        None => ("z".to_string(), "w".to_string()),
    };
    let a = real.vertex(x)?.renamed(&u)?;
    let b = real.vertex(y)?.renamed(&v)?;
    let mut out = String::new();
    let _ = writeln!(out, "realization {} of {}", real.name, real.target);
    for (p, q) in [(&a, &b), (&b, &a)] {
        let c = real.contract(p, q)?;
        let factor = match &c.factor {
            Factor::Closed(f) => f.to_string(),
            Factor::Series(s) => format!("{s} (series only)"),
        };
        let _ = writeln!(
            out,
            "{}({}) {}({}) = {} * [{}](t = {}/{}) :{}({}) {}({}):",
            p.label, p.var, q.label, q.var, c.scalar, factor, q.var, p.var, p.label, p.var, q.label, q.var
        );
        let series = real.contraction_bracket(p, q)?.contraction_series(RATIO_VAR, order)?;
        let _ = writeln!(out, "  to order {order} in {RATIO_VAR} = {}/{}: {series}", q.var, p.var);
    }
    match verify_exchange(&real, &doc.algebra, x, y) {
        Ok(c) => {
            let _ = writeln!(out, "exchange ratio: {}", c.ratio);
            let _ = writeln!(out, "structure function: {}", c.target);
            let verdict = if c.passes() { "holds" } else { "fails" };
            let _ = writeln!(out, "ratio / structure function: {} ({verdict})", c.quotient);
        }
        Err(VertexError::Unsupported(msg)) => {
            let ratio = real.contract(&a, &b)?.to_ratfunc()?.div(&real.contract(&b, &a)?.to_ratfunc()?)?;
            let _ = writeln!(out, "exchange ratio: {ratio}");
            let _ = writeln!(out, "no exchange relation to compare with: {msg}");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}

fn continuum(rep: &str, x: &str, y: &str, shifts: usize) -> Result<String, OpeError> {
    let (rep_value, alg) = if rep == "c1" {
        (ContinuumRep::level_one(Orientation::Flipped), parse_spec(DEF1_SOURCE)?)
    } else {
        (ContinuumRep::gamma_sqrt_q(Orientation::Flipped), parse_document(UQ_SOURCE)?.algebra)
    };
    let pt = OPE_POINT;
    let (a, b) = (rep_value.vertex(x)?, rep_value.vertex(y)?);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "representation {} at hbar = {}, eta = {}, u = {}, v = {}, recurrence depth {shifts}",
        rep_value.name, pt.hbar, pt.eta, pt.u, pt.v
    );
    let fwd = rep_value.log_contraction(a, pt.u, b, pt.v, pt.hbar, pt.eta, shifts);
    let back = rep_value.log_contraction(b, pt.v, a, pt.u, pt.hbar, pt.eta, shifts);
    let _ = writeln!(out, "ln <{x}(u) {y}(v)> = {fwd:.12}");
    let _ = writeln!(out, "ln <{y}(v) {x}(u)> = {back:.12}");
    let ratio = rep_value.exchange_ratio(x, y, pt, shifts)?;
    let _ = writeln!(out, "exchange ratio: {ratio:.12}");
    if let Some(e) = alg.exchange(x, y) {
        let (un, vn) = (e.left.var().unwrap_or("u"), e.right.var().unwrap_or("v"));
        let want = eval_at(&e.structure_function(), &alg.rules(), &rep_value.target_point(pt, un, vn))?;
        let _ = writeln!(out, "structure function: {want:.12}");
        let _ = writeln!(out, "relative error: {:.3e}", crate::exact::rel_error(ratio, want));
    } else {
        let _ = writeln!(out, "no exchange relation for {x}{y} in {}", alg.name);
    }
    Ok(out)
}
