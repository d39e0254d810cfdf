use std::collections::BTreeSet;

use super::lexer::{lex, Tok, Token};
use super::*;
use crate::symexpr::{Const, Func, SymExpr};

/// Parse a document holding one algebra and any number of realizations,
/// then run the load-time parity and reciprocity checks.
pub fn parse_document(src: &str) -> Result<Document, DslError> {
    let mut p = Parser::new(lex(src)?);
    let algebra = p.algebra()?;
    let mut realizations = Vec::new();
    while !p.at_eof() {
        realizations.push(p.realization(&algebra)?);
    }
    checks::check_parity(&algebra)?;
    checks::check_reciprocity(&algebra)?;
    Ok(Document { algebra, realizations })
}

/// Parse only the algebra part of a document.
pub fn parse_spec(src: &str) -> Result<AlgebraSpec, DslError> {
    parse_document(src).map(|d| d.algebra)
}

/// Parse a standalone expression over the given parameters and variables.
pub fn parse_expr(src: &str, params: &[&str], vars: &[&str]) -> Result<SymExpr, DslError> {
    let mut p = Parser::new(lex(src)?);
    p.scope.params = params.iter().map(|s| s.to_string()).collect();
    p.scope.vars = vars.iter().map(|s| s.to_string()).collect();
    let e = p.expr()?;
    if !p.at_eof() {
        return Err(p.unexpected("end of input"));
    }
    Ok(e)
}

const CONSTS: &[(&str, Const)] = &[("i", Const::I), ("pi", Const::Pi), ("gammaE", Const::EulerGamma)];

const KEYWORDS: &[&str] = &[
    "algebra", "realization", "of", "spectral", "param", "central", "current", "group", "bracket",
    "formal", "let", "mode", "zero", "vertex", "delta_add", "delta_mult", "odd", "even",
];

#[derive(Default)]
struct Scope {
    /// Currents callable as `NAME(arg)`.
    currents: BTreeSet<String>,
    /// Identifiers read as parameters.
    params: BTreeSet<String>,
    /// Identifiers read as variables in the current statement.
    vars: BTreeSet<String>,
    /// Mode fields applied as `a(z)` inside realizations.
    modes: BTreeSet<String>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scope: Scope,
    family: usize,
}

type PResult<T> = Result<T, DslError>;

impl Parser {
    fn new(toks: Vec<Token>) -> Self {
        Parser { toks, pos: 0, scope: Scope::default(), family: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn error(&self, kind: DslErrorKind) -> DslError {
        let (line, col) = self.here();
        DslError { line, col, kind }
    }

    fn unexpected(&self, expected: &str) -> DslError {
        self.error(DslErrorKind::Unexpected {
            found: self.peek().describe(),
            expected: expected.to_string(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{s}`")))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == w)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{w}`")))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    /// A name with an optional `+`/`-` suffix directly before `(`.
    fn signed_name(&mut self) -> PResult<String> {
        let base = self.ident()?;
        if let (Tok::Sym(s @ ("+" | "-")), Tok::Sym("(")) = (self.peek().clone(), self.peek_at(1).clone()) {
            self.bump();
            return Ok(format!("{base}{s}"));
        }
        Ok(base)
    }

    /// Length in tokens of a current name starting here, if one is declared.
    fn current_at(&self, offset: usize) -> Option<(String, usize)> {
        let Tok::Ident(base) = self.peek_at(offset) else { return None };
        if let (Tok::Sym(s @ ("+" | "-")), Tok::Sym("(")) = (self.peek_at(offset + 1), self.peek_at(offset + 2)) {
            let name = format!("{base}{s}");
            if self.scope.currents.contains(&name) {
                return Some((name, 2));
            }
        }
        if matches!(self.peek_at(offset + 1), Tok::Sym("(")) && self.scope.currents.contains(base) {
            return Some((base.clone(), 1));
        }
        None
    }

    fn declare(&self, set: &BTreeSet<String>, name: &str) -> PResult<()> {
        if set.contains(name) {
            Err(self.error(DslErrorKind::Duplicate(name.to_string())))
        } else {
            Ok(())
        }
    }

    fn end_of_statement(&self) -> PResult<usize> {
        let mut depth = 0i32;
        for (k, t) in self.toks[self.pos..].iter().enumerate() {
            match &t.tok {
                Tok::Sym("(") => depth += 1,
                Tok::Sym(")") => depth -= 1,
                Tok::Sym(";") if depth == 0 => return Ok(self.pos + k),
                Tok::Sym("{") | Tok::Sym("}") | Tok::Eof => break,
                _ => {}
            }
        }
        Err(self.unexpected("`;` ending the statement"))
    }

    /// Expand a `±`/`∓` template into its two sign choices in place.
    /// Returns the number of statements now waiting at the cursor.
    fn expand_template(&mut self) -> PResult<usize> {
        let end = self.end_of_statement()?;
        let stmt = &self.toks[self.pos..=end];
        if !stmt.iter().any(|t| matches!(t.tok, Tok::Sym("±") | Tok::Sym("∓"))) {
            return Ok(1);
        }
        let variant = |upper: bool| -> Vec<Token> {
            stmt.iter()
                .map(|t| {
                    let tok = match t.tok {
                        Tok::Sym("±") => Tok::Sym(if upper { "+" } else { "-" }),
                        Tok::Sym("∓") => Tok::Sym(if upper { "-" } else { "+" }),
                        ref other => other.clone(),
                    };
                    Token { tok, line: t.line, col: t.col }
                })
                .collect()
        };
        let expanded: Vec<Token> = variant(true).into_iter().chain(variant(false)).collect();
        self.toks.splice(self.pos..=end, expanded);
        Ok(2)
    }

    // ---- algebra ----

    fn algebra(&mut self) -> PResult<AlgebraSpec> {
        self.expect_word("algebra")?;
        let name = self.ident()?;
        self.expect_sym("{")?;
        let mut spec = AlgebraSpec {
            name,
            spectral: Spectral::Additive,
            params: Vec::new(),
            centrals: Vec::new(),
            currents: Vec::new(),
            relations: Vec::new(),
            lines: Vec::new(),
        };
        while !self.eat_sym("}") {
            if self.at_eof() {
                return Err(self.unexpected("`}`"));
            }
            self.algebra_item(&mut spec)?;
        }
        Ok(spec)
    }

    fn algebra_item(&mut self, spec: &mut AlgebraSpec) -> PResult<()> {
        if self.eat_word("spectral") {
            spec.spectral = if self.eat_word("additive") {
                Spectral::Additive
            } else if self.eat_word("multiplicative") {
                Spectral::Multiplicative
            } else {
                return Err(self.unexpected("`additive` or `multiplicative`"));
            };
            return self.expect_sym(";");
        }
        if self.eat_word("param") {
            let first = self.ident()?;
            if self.eat_sym(":=") {
                let rule = self.expr()?;
                self.declare(&self.scope.params, &first)?;
                self.scope.params.insert(first.clone());
                spec.params.push(ParamDecl { name: first, rule: Some(rule) });
                return self.expect_sym(";");
            }
            let mut names = vec![first];
            while self.eat_sym(",") {
                names.push(self.ident()?);
            }
            for n in names {
                self.declare(&self.scope.params, &n)?;
                self.scope.params.insert(n.clone());
                spec.params.push(ParamDecl { name: n, rule: None });
            }
            return self.expect_sym(";");
        }
        if self.eat_word("central") {
            loop {
                let n = self.ident()?;
                self.declare(&self.scope.params, &n)?;
                self.scope.params.insert(n.clone());
                spec.centrals.push(n);
                if !self.eat_sym(",") {
                    break;
                }
            }
            return self.expect_sym(";");
        }
        if self.eat_word("current") {
            let name = self.signed_name()?;
            self.declare(&self.scope.currents, &name)?;
            self.expect_sym("(")?;
            let var = self.ident()?;
            self.expect_sym(")")?;
            let parity = if self.eat_word("odd") {
                Parity::Odd
            } else if self.eat_word("even") {
                Parity::Even
            } else {
                return Err(self.unexpected("`odd` or `even`"));
            };
            self.expect_sym(";")?;
            self.scope.currents.insert(name.clone());
            spec.currents.push(CurrentDecl { name, var, parity });
            return Ok(());
        }
        if self.eat_word("group") {
            self.expect_sym("{")?;
            let family = self.next_family();
            while !self.eat_sym("}") {
                if self.at_eof() {
                    return Err(self.unexpected("`}`"));
                }
                self.relation_statement(spec, family)?;
            }
            self.eat_sym(";");
            return Ok(());
        }
        let family = self.next_family();
        self.relation_statement(spec, family)
    }

    fn next_family(&mut self) -> usize {
        self.family += 1;
        self.family - 1
    }

    fn relation_statement(&mut self, spec: &mut AlgebraSpec, family: usize) -> PResult<()> {
        let count = self.expand_template()?;
        for _ in 0..count {
            let line = self.here().0;
            let kind = if self.eat_word("bracket") {
                RelationKind::Bracket(self.bracket()?)
            } else {
                RelationKind::Exchange(self.exchange()?)
            };
            spec.relations.push(Relation { family, kind });
            spec.lines.push(line);
        }
        Ok(())
    }

    /// `X(u) Y(v)` with bare variables; the variables enter the statement scope.
    fn lhs_pair(&mut self) -> PResult<(CurrentRef, CurrentRef)> {
        self.scope.vars.clear();
        let mut pair = Vec::new();
        for _ in 0..2 {
            let name = self.current_name()?;
            self.expect_sym("(")?;
            let var = self.ident()?;
            if self.scope.params.contains(&var) || self.scope.vars.contains(&var) {
                return Err(self.error(DslErrorKind::Duplicate(var)));
            }
            self.expect_sym(")")?;
            self.scope.vars.insert(var.clone());
            pair.push(CurrentRef { name, arg: SymExpr::Var(var) });
        }
        let right = pair.pop().unwrap();
        Ok((pair.pop().unwrap(), right))
    }

    fn current_name(&mut self) -> PResult<String> {
        match self.current_at(0) {
            Some((name, len)) => {
                for _ in 0..len {
                    self.bump();
                }
                Ok(name)
            }
            None => match self.peek().clone() {
                Tok::Ident(s) => Err(self.error(DslErrorKind::UnknownSymbol(s))),
                _ => Err(self.unexpected("a current")),
            },
        }
    }

    fn current_ref(&mut self) -> PResult<CurrentRef> {
        let name = self.current_name()?;
        self.expect_sym("(")?;
        let arg = self.expr()?;
        self.expect_sym(")")?;
        Ok(CurrentRef { name, arg })
    }

    fn exchange(&mut self) -> PResult<Exchange> {
        let (left, right) = self.lhs_pair()?;
        self.expect_sym("=")?;
        let negative = self.eat_sym("-");
        let factor = if self.current_at(0).is_some() { SymExpr::num(1) } else { self.expr()? };
        let (line, col) = self.here();
        let r1 = self.current_ref()?;
        let r2 = self.current_ref()?;
        self.expect_sym(";")?;
        if r1 != right || r2 != left {
            return Err(DslError {
                line,
                col,
                kind: DslErrorKind::Malformed(format!(
                    "right-hand side must read {}({}) {}({})",
                    right.name, right.arg, left.name, left.arg
                )),
            });
        }
        Ok(Exchange { left, right, negative, factor })
    }

    fn bracket(&mut self) -> PResult<Bracket> {
        let (left, right) = self.lhs_pair()?;
        self.expect_sym("=")?;
        let mut terms = vec![self.delta_term(false)?];
        loop {
            if self.eat_sym("+") {
                terms.push(self.delta_term(false)?);
            } else if self.eat_sym("-") {
                terms.push(self.delta_term(true)?);
            } else {
                break;
            }
        }
        self.expect_sym(";")?;
        Ok(Bracket { left, right, terms })
    }

    fn is_delta(&self, offset: usize) -> Option<DeltaKind> {
        match self.peek_at(offset) {
            Tok::Ident(s) if s == "delta_add" => Some(DeltaKind::Additive),
            Tok::Ident(s) if s == "delta_mult" => Some(DeltaKind::Multiplicative),
            _ => None,
        }
    }

    fn delta_term(&mut self, negated: bool) -> PResult<DeltaTerm> {
        let coef = if self.is_delta(0).is_some() {
            SymExpr::num(1)
        } else {
            let mut acc = self.unary()?;
            loop {
                if self.is_sym("*") && self.is_delta(1).is_some() {
                    self.bump();
                    break;
                } else if self.eat_sym("*") {
                    acc = SymExpr::mul(acc, self.power()?);
                } else if self.eat_sym("/") {
                    acc = SymExpr::div(acc, self.power()?);
                } else {
                    return Err(self.unexpected("`*delta_add(...)` or `*delta_mult(...)`"));
                }
            }
            acc
        };
        let coef = if negated { SymExpr::neg(coef) } else { coef };
        let kind = self.is_delta(0).expect("checked above");
        self.bump();
        self.expect_sym("(")?;
        let support = self.expr()?;
        self.expect_sym(")")?;
        let current = self.current_ref()?;
        Ok(DeltaTerm { coef, kind, support, current })
    }

    // ---- realization ----

    fn realization(&mut self, algebra: &AlgebraSpec) -> PResult<RealizationSpec> {
        self.expect_word("realization")?;
        let name = self.ident()?;
        self.expect_word("of")?;
        let target = self.ident()?;
        if target != algebra.name {
            return Err(self.error(DslErrorKind::UnknownSymbol(target)));
        }
        self.expect_sym("{")?;
        let mut spec = RealizationSpec {
            name,
            target,
            formals: Vec::new(),
            lets: Vec::new(),
            modes: Vec::new(),
            zeros: Vec::new(),
            brackets: Vec::new(),
            vertices: Vec::new(),
        };
        let saved = std::mem::take(&mut self.scope);
        self.scope.params = algebra.params.iter().map(|p| p.name.clone()).chain(algebra.centrals.iter().cloned()).collect();
        let result = self.realization_body(algebra, &mut spec);
        self.scope = saved;
        result.map(|_| spec)
    }

    fn realization_body(&mut self, algebra: &AlgebraSpec, spec: &mut RealizationSpec) -> PResult<()> {
        let targets: BTreeSet<String> = algebra.currents.iter().map(|c| c.name.clone()).collect();
        while !self.eat_sym("}") {
            if self.at_eof() {
                return Err(self.unexpected("`}`"));
            }
            if self.eat_word("formal") {
                loop {
                    let n = self.ident()?;
                    self.declare(&self.scope.params, &n)?;
                    self.scope.params.insert(n.clone());
                    spec.formals.push(n);
                    if !self.eat_sym(",") {
                        break;
                    }
                }
                self.expect_sym(";")?;
            } else if self.eat_word("let") {
                let n = self.ident()?;
                self.expect_sym("=")?;
                self.scope.vars.clear();
                let e = self.expr()?;
                self.expect_sym(";")?;
                self.scope.params.insert(n.clone());
                spec.lets.push((n, e));
            } else if self.eat_word("mode") {
                let n = self.ident()?;
                self.declare(&self.scope.modes, &n)?;
                self.expect_sym(";")?;
                self.scope.modes.insert(n.clone());
                spec.modes.push(n);
            } else if self.eat_word("zero") {
                let p = self.ident()?;
                let q = self.ident()?;
                self.expect_sym(";")?;
                for n in [&p, &q] {
                    self.declare(&self.scope.params, n)?;
                    self.scope.params.insert(n.clone());
                }
                spec.zeros.push((p, q));
            } else if self.eat_word("bracket") {
                let left = self.mode_name()?;
                let right = self.mode_name()?;
                self.expect_sym("=")?;
                self.scope.vars.clear();
                let mut terms = Vec::new();
                loop {
                    let weight = self.expr()?;
                    self.expect_sym("@")?;
                    let ratio = self.expr()?;
                    terms.push((weight, ratio));
                    if !self.eat_sym(",") {
                        break;
                    }
                }
                self.expect_sym(";")?;
                spec.brackets.push(ModeBracketDecl { left, right, terms });
            } else if self.is_word("vertex") {
                let count = self.expand_template()?;
                for _ in 0..count {
                    self.expect_word("vertex")?;
                    let v = self.vertex(&targets)?;
                    self.scope.currents.insert(v.name.clone());
                    spec.vertices.push(v);
                }
            } else {
                return Err(self.unexpected("a realization item"));
            }
        }
        Ok(())
    }

    fn mode_name(&mut self) -> PResult<String> {
        let n = self.ident()?;
        if self.scope.modes.contains(&n) {
            Ok(n)
        } else {
            Err(self.error(DslErrorKind::UnknownSymbol(n)))
        }
    }

    fn vertex(&mut self, targets: &BTreeSet<String>) -> PResult<VertexDecl> {
        let at = self.here();
        let name = self.signed_name()?;
        if !targets.contains(&name) {
            return Err(DslError { line: at.0, col: at.1, kind: DslErrorKind::UnknownSymbol(name) });
        }
        self.expect_sym("(")?;
        let var = self.ident()?;
        self.expect_sym(")")?;
        self.expect_sym("=")?;
        self.scope.vars.clear();
        self.scope.vars.insert(var.clone());
        let body = if self.eat_sym(":") {
            let mut parts = Vec::new();
            while !self.eat_sym(":") {
                parts.push(self.current_ref()?);
            }
            if parts.is_empty() {
                return Err(self.unexpected("a vertex inside `: :`"));
            }
            VertexBody::Fused(parts)
        } else {
            VertexBody::Exponent(self.expr()?)
        };
        self.expect_sym(";")?;
        Ok(VertexDecl { name, var, body })
    }

    // ---- expressions ----

    fn expr(&mut self) -> PResult<SymExpr> {
        let mut acc = self.term()?;
        loop {
            if self.eat_sym("+") {
                acc = SymExpr::add(acc, self.term()?);
            } else if self.eat_sym("-") {
                acc = SymExpr::sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<SymExpr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_sym("*") {
                acc = SymExpr::mul(acc, self.unary()?);
            } else if self.eat_sym("/") {
                acc = SymExpr::div(acc, self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> PResult<SymExpr> {
        if self.eat_sym("-") {
            return Ok(SymExpr::neg(self.unary()?));
        }
        if self.eat_sym("+") {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> PResult<SymExpr> {
        let base = self.atom()?;
        if self.eat_sym("^") {
            let exp = self.unary()?;
            return Ok(SymExpr::pow(base, exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<SymExpr> {
        match self.peek().clone() {
            Tok::Number(r) => {
                self.bump();
                Ok(SymExpr::Num(r))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if self.current_at(0).is_some() {
                    return Err(self.unexpected("an expression"));
                }
                let call = matches!(self.peek_at(1), Tok::Sym("("));
                if call {
                    if let Some(f) = Func::from_name(&name) {
                        self.bump();
                        self.bump();
                        let arg = self.expr()?;
                        self.expect_sym(")")?;
                        return Ok(SymExpr::call(f, arg));
                    }
                    if self.scope.modes.contains(&name) {
                        self.bump();
                        self.bump();
                        let arg = self.expr()?;
                        self.expect_sym(")")?;
                        return Ok(SymExpr::Apply(name, Box::new(arg)));
                    }
                }
                if let Some((_, c)) = CONSTS.iter().find(|(n, _)| *n == name) {
                    self.bump();
                    return Ok(SymExpr::Const(*c));
                }
                if self.scope.vars.contains(&name) {
                    self.bump();
                    return Ok(SymExpr::Var(name));
                }
                if self.scope.params.contains(&name) {
                    self.bump();
                    return Ok(SymExpr::Param(name));
                }
                Err(self.error(DslErrorKind::UnknownSymbol(name)))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}
