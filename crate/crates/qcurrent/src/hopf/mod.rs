//! Co-structure of the infinite family of two-parameter current algebras.
//!
//! Elements are [`TensorWord`]s: sums of coefficient-weighted ordered
//! products of current symbols, each tagged with its tensor slot and the
//! family index of the algebra it lives in. Coproducts, counits, antipodes
//! and shift morphisms act by literal substitution; per-slot normal
//! ordering uses the exchange relations of the built-in definition, and
//! coefficient identities are decided numerically.

mod axioms;
mod maps;
mod rewrite;
mod word;

pub use axioms::{
    central_image, verify_all_axioms, verify_family_axiom, Axiom, AxiomReport, GeneratorCheck,
    HopfDomain, Status,
};
pub use maps::{antipode, coproduct, counit, merge_slots, shift, tau_table, Direction, MapError};
pub use rewrite::{normal_order, ExchangeTable, NormalForm, RewriteError, SamplePoint};
pub use word::{Coef, ExchangeFactor, FamilyLevels, Gen, LevelRef, Rapidity, Symbol, TensorWord, Term};

/// Family index at which every axiom is checked. Indices `n - 1 ..= n + 2`
/// are touched, so the sequence must cover them.
pub const BASE_INDEX: i32 = 2;
