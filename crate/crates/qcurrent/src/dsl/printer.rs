use std::fmt::Write;

use super::*;
use crate::symexpr::SymExpr;

/// Canonical text of an algebra. Families with several members print as
/// `group { ... }`, so re-parsing reproduces the family structure.
pub fn print_spec(spec: &AlgebraSpec) -> String {
    let mut out = String::new();
    writeln!(out, "algebra {} {{", spec.name).unwrap();
    let spectral = match spec.spectral {
        Spectral::Additive => "additive",
        Spectral::Multiplicative => "multiplicative",
    };
    writeln!(out, "  spectral {spectral};").unwrap();
    let mut plain = Vec::new();
    let flush = |out: &mut String, plain: &mut Vec<String>| {
        if !plain.is_empty() {
            writeln!(out, "  param {};", plain.join(", ")).unwrap();
            plain.clear();
        }
    };
    // Centrals may be referenced by derived parameters, so they print first.
    if !spec.centrals.is_empty() {
        writeln!(out, "  central {};", spec.centrals.join(", ")).unwrap();
    }
    for p in &spec.params {
        match &p.rule {
            None => plain.push(p.name.clone()),
            Some(rule) => {
                flush(&mut out, &mut plain);
                writeln!(out, "  param {} := {};", p.name, rule).unwrap();
            }
        }
    }
    flush(&mut out, &mut plain);
    for c in &spec.currents {
        let parity = match c.parity {
            Parity::Odd => "odd",
            Parity::Even => "even",
        };
        writeln!(out, "  current {}({}) {};", c.name, c.var, parity).unwrap();
    }
    let mut i = 0;
    while i < spec.relations.len() {
        let family = spec.relations[i].family;
        let mut j = i;
        while j < spec.relations.len() && spec.relations[j].family == family {
            j += 1;
        }
        if j - i > 1 {
            writeln!(out, "  group {{").unwrap();
            for r in &spec.relations[i..j] {
                writeln!(out, "    {}", relation_text(&r.kind)).unwrap();
            }
            writeln!(out, "  }}").unwrap();
        } else {
            writeln!(out, "  {}", relation_text(&spec.relations[i].kind)).unwrap();
        }
        i = j;
    }
    out.push_str("}\n");
    out
}

/// The algebra followed by each realization block.
pub fn print_document(doc: &Document) -> String {
    let mut out = print_spec(&doc.algebra);
    for r in &doc.realizations {
        out.push('\n');
        out.push_str(&print_realization(r));
    }
    out
}

fn current(c: &CurrentRef) -> String {
    format!("{}({})", c.name, c.arg)
}

fn relation_text(kind: &RelationKind) -> String {
    match kind {
        RelationKind::Exchange(e) => {
            let mut rhs = String::new();
            if e.negative {
                rhs.push('-');
            }
            if e.factor != SymExpr::num(1) {
                let text = e.factor.to_string();
                if !e.negative && text.starts_with('-') {
                    write!(rhs, "({text}) ").unwrap();
                } else {
                    write!(rhs, "{text} ").unwrap();
                }
            }
            format!(
                "{} {} = {}{} {};",
                current(&e.left),
                current(&e.right),
                rhs,
                current(&e.right),
                current(&e.left)
            )
        }
        RelationKind::Bracket(b) => {
            let mut text = format!("bracket {} {} = ", current(&b.left), current(&b.right));
            for (k, t) in b.terms.iter().enumerate() {
                let coef = match (&t.coef, k) {
                    (SymExpr::Neg(inner), k) if k > 0 => {
                        text.push_str(" - ");
                        (**inner).clone()
                    }
                    (c, k) => {
                        if k > 0 {
                            text.push_str(" + ");
                        }
                        c.clone()
                    }
                };
                if coef != SymExpr::num(1) {
                    if coef.prec() < 2 {
                        write!(text, "({coef})*").unwrap();
                    } else {
                        write!(text, "{coef}*").unwrap();
                    }
                }
                write!(text, "{}({}) {}", t.kind.keyword(), t.support, current(&t.current)).unwrap();
            }
            text.push(';');
            text
        }
    }
}

fn print_realization(r: &RealizationSpec) -> String {
    let mut out = String::new();
    writeln!(out, "realization {} of {} {{", r.name, r.target).unwrap();
    if !r.formals.is_empty() {
        writeln!(out, "  formal {};", r.formals.join(", ")).unwrap();
    }
    for (n, e) in &r.lets {
        writeln!(out, "  let {n} = {e};").unwrap();
    }
    for m in &r.modes {
        writeln!(out, "  mode {m};").unwrap();
    }
    for (p, q) in &r.zeros {
        writeln!(out, "  zero {p} {q};").unwrap();
    }
    for b in &r.brackets {
        let terms: Vec<String> = b.terms.iter().map(|(w, x)| format!("{w} @ {x}")).collect();
        writeln!(out, "  bracket {} {} = {};", b.left, b.right, terms.join(", ")).unwrap();
    }
    for v in &r.vertices {
        let body = match &v.body {
            VertexBody::Exponent(e) => e.to_string(),
            VertexBody::Fused(parts) => {
                let p: Vec<String> = parts.iter().map(current).collect();
                format!(":{}:", p.join(" "))
            }
        };
        writeln!(out, "  vertex {}({}) = {};", v.name, v.var, body).unwrap();
    }
    out.push_str("}\n");
    out
}
