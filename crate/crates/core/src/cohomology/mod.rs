//! Eilenberg-MacLane cochains with coefficients in `Sym^n` of the standard
//! representation, and their evaluation on the filling built from the
//! contraction.

pub mod cochain;
pub mod filling;
pub mod sym;

pub use crate::contraction::chain::{FormalChain, Term};
pub use cochain::{coboundary, required_support, Cochain};
pub use filling::{cocycle_from_generators, expected_face, face_identity_check, filling_sigma};
pub use sym::{rho_sym, SymTensor};
