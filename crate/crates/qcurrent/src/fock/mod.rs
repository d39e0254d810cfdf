//! Heisenberg mode families, zero modes, the regularized Fock pairing and
//! Wick sums.

mod modes;
mod pairing;
mod wick;
mod zero;

pub use modes::{DiscreteModes, ModeError};
pub use pairing::{keyhole_integral, pairing_regularized, Pairing, PairingError, KEYHOLE_RADIUS};
pub use wick::{vacuum_expectation, wick_sum, Ladder};
pub use zero::{
    zero_mode_commutator, zero_mode_reorder, LogBasis, ZeroCoef, ZeroError, ZeroExponent, ZeroScalar,
};
