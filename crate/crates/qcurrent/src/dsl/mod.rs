//! The `.qalg` presentation language: algebras given by currents and
//! exchange/bracket relations, plus free-field realization tables.

mod checks;
pub mod fuzz;
mod lexer;
mod parammap;
mod parser;
mod printer;

use std::fmt;

use crate::symexpr::SymExpr;

pub use checks::{check_parity, check_reciprocity, sample_env};
pub(crate) use checks::eval_at;
pub use parammap::{
    verify_param_map, CurrentMap, DeltaTransport, ParamMap, ParamMapError, ParamMapReport, RelationCheck,
};
pub use parser::{parse_document, parse_expr, parse_spec};
pub use printer::{print_document, print_spec};

/// The two algebra definitions shipped with the crate.
pub const DEF1_SOURCE: &str = include_str!("../../specs/def1.qalg");
pub const UQ_SOURCE: &str = include_str!("../../specs/uq_osp22.qalg");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spectral {
    /// Currents depend on `u` through differences `u - v`.
    Additive,
    /// Currents depend on `z` through ratios `w/z`.
    Multiplicative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamDecl {
    pub name: String,
    /// `Some(expr)` for a derived parameter `name := expr`.
    pub rule: Option<SymExpr>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurrentDecl {
    pub name: String,
    pub var: String,
    pub parity: Parity,
}

/// A current applied to an argument, e.g. `H+(u - i*hbar*c/4)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurrentRef {
    pub name: String,
    pub arg: SymExpr,
}

impl CurrentRef {
    /// The variable name when the argument is a bare variable.
    pub fn var(&self) -> Option<&str> {
        match &self.arg {
            SymExpr::Var(v) => Some(v),
            _ => None,
        }
    }
}

/// `X(u) Y(v) = [-] f Y(v) X(u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Exchange {
    pub left: CurrentRef,
    pub right: CurrentRef,
    /// Written with a leading minus sign.
    pub negative: bool,
    pub factor: SymExpr,
}

impl Exchange {
    /// The full structure function including the leading sign.
    pub fn structure_function(&self) -> SymExpr {
        if self.negative {
            SymExpr::neg(self.factor.clone())
        } else {
            self.factor.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaKind {
    /// `delta_add(x)`, supported at `x = 0`.
    Additive,
    /// `delta_mult(x)`, supported at `x = 1`.
    Multiplicative,
}

impl DeltaKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DeltaKind::Additive => "delta_add",
            DeltaKind::Multiplicative => "delta_mult",
        }
    }
}

/// `coef * delta(support) T(arg)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaTerm {
    pub coef: SymExpr,
    pub kind: DeltaKind,
    pub support: SymExpr,
    pub current: CurrentRef,
}

/// `bracket X(u) Y(v) = Σ delta terms`; an anticommutator when both currents
/// are odd and a commutator otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Bracket {
    pub left: CurrentRef,
    pub right: CurrentRef,
    pub terms: Vec<DeltaTerm>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RelationKind {
    Exchange(Exchange),
    Bracket(Bracket),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    /// Relations written together (a `group` or a `±` template) share a family.
    pub family: usize,
    pub kind: RelationKind,
}

#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    pub name: String,
    pub spectral: Spectral,
    pub params: Vec<ParamDecl>,
    pub centrals: Vec<String>,
    pub currents: Vec<CurrentDecl>,
    pub relations: Vec<Relation>,
    /// Source line of each relation, parallel to `relations`.
    pub lines: Vec<usize>,
}

impl PartialEq for AlgebraSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.spectral == other.spectral
            && self.params == other.params
            && self.centrals == other.centrals
            && self.currents == other.currents
            && self.relations == other.relations
    }
}

impl AlgebraSpec {
    pub fn current(&self, name: &str) -> Option<&CurrentDecl> {
        self.currents.iter().find(|c| c.name == name)
    }

    pub fn parity(&self, name: &str) -> Option<Parity> {
        self.current(name).map(|c| c.parity)
    }

    pub fn exchanges(&self) -> impl Iterator<Item = &Exchange> {
        self.relations.iter().filter_map(|r| match &r.kind {
            RelationKind::Exchange(e) => Some(e),
            _ => None,
        })
    }

    pub fn brackets(&self) -> impl Iterator<Item = &Bracket> {
        self.relations.iter().filter_map(|r| match &r.kind {
            RelationKind::Bracket(b) => Some(b),
            _ => None,
        })
    }

    /// The exchange relation `X(.) Y(.) = f Y(.) X(.)` for the ordered pair.
    pub fn exchange(&self, x: &str, y: &str) -> Option<&Exchange> {
        self.exchanges().find(|e| e.left.name == x && e.right.name == y)
    }

    pub fn bracket(&self, x: &str, y: &str) -> Option<&Bracket> {
        self.brackets().find(|b| b.left.name == x && b.right.name == y)
    }

    pub fn family_count(&self) -> usize {
        let mut f: Vec<usize> = self.relations.iter().map(|r| r.family).collect();
        f.sort();
        f.dedup();
        f.len()
    }

    /// Number of generators counted the usual way: currents plus centrals.
    pub fn generator_count(&self) -> usize {
        self.currents.len() + self.centrals.len()
    }

    pub fn is_param(&self, name: &str) -> bool {
        self.params.iter().any(|p| p.name == name) || self.centrals.iter().any(|c| c == name)
    }
}

/// `[x_n, y_{-n}] = (1/n) Σ α_j r_j^n` for `n > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeBracketDecl {
    pub left: String,
    pub right: String,
    pub terms: Vec<(SymExpr, SymExpr)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum VertexBody {
    /// `:exp(exponent):`, the exponent linear in mode fields and zero modes.
    Exponent(SymExpr),
    /// `:A(arg) B(arg) ...:` in terms of earlier vertices.
    Fused(Vec<CurrentRef>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexDecl {
    pub name: String,
    pub var: String,
    pub body: VertexBody,
}

/// A discrete free-field realization of an algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizationSpec {
    pub name: String,
    pub target: String,
    /// Formal base parameters of the exact arithmetic, e.g. `s` with `q = s^2`.
    pub formals: Vec<String>,
    /// Substitutions applied both to the realization and to the target.
    pub lets: Vec<(String, SymExpr)>,
    pub modes: Vec<String>,
    /// `(P, Q)` zero-mode pairs with `[P, Q] = 1`.
    pub zeros: Vec<(String, String)>,
    pub brackets: Vec<ModeBracketDecl>,
    pub vertices: Vec<VertexDecl>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub algebra: AlgebraSpec,
    pub realizations: Vec<RealizationSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DslErrorKind {
    Lex(String),
    Unexpected { found: String, expected: String },
    UnknownSymbol(String),
    Duplicate(String),
    Malformed(String),
    Parity(String),
    Reciprocity(String),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct DslError {
    pub line: usize,
    pub col: usize,
    pub kind: DslErrorKind,
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.col)?;
        match &self.kind {
            DslErrorKind::Lex(m) => write!(f, "{m}"),
            DslErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {expected}, found {found}")
            }
            DslErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            DslErrorKind::Duplicate(s) => write!(f, "`{s}` is declared twice"),
            DslErrorKind::Malformed(m) => write!(f, "{m}"),
            DslErrorKind::Parity(m) => write!(f, "parity mismatch: {m}"),
            DslErrorKind::Reciprocity(m) => write!(f, "reciprocity fails: {m}"),
        }
    }
}
