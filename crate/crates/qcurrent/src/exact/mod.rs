//! Exact arithmetic: rationals, multivariate polynomials and rational
//! functions, truncated series, geometric mode brackets, and randomized
//! identity testing for everything that is not rational.

mod geom;
mod identity;
mod poly;
mod ratfunc;
mod series;

pub use geom::{GeomBracket, LinearFactors, Pole};
pub use identity::{
    rand_ident_test, rel_error, EvalFailure, IdentityError, IdentityOutcome, Point, SampleDomain,
    Sampler, MAX_REDRAWS, NEAR_POLE,
};
pub use poly::{Mono, Poly};
pub use ratfunc::RatFunc;
pub use series::{TruncSeries, MAX_SERIES_ORDER};

pub(crate) use poly::rat_to_f64;

/// Exact rationals with arbitrary-precision numerator and denominator.
pub type Rat = num_rational::BigRational;

/// Build a rational from machine integers.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series order {requested} exceeds the configured cap {cap}")]
    OrderOverflow { requested: usize, cap: usize },
    #[error("series in `{0}` and `{1}` cannot be combined")]
    VariableMismatch(String, String),
    #[error("exponential needs a series with zero constant term")]
    NonzeroConstantTerm,
    #[error("rational function has a pole at {0} = 0")]
    PoleAtOrigin(String),
    #[error("a series needs at least one coefficient")]
    EmptySeries,
    #[error("{0}")]
    Unsupported(String),
}
