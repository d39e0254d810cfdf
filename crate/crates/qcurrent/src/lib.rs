pub mod continuum;
pub mod dsl;
pub mod exact;
pub mod hopf;
pub mod fock;
pub mod symexpr;
pub mod report;
pub mod vertex;
