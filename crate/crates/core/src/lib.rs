//! Exact combinatorial model of the well-rounded retract of `GL_2` and
//! `GL_3`: cells keyed by their minimal-vector decorations, the recursive
//! contraction onto the fundamental cell, and the Eilenberg-MacLane filling
//! built from it.

pub mod cohomology;
pub mod complex;
pub mod contraction;
pub mod error;
pub mod intvec;
pub mod par;
pub mod quadform;
pub mod rational;
pub mod suites;

pub use error::{Error, Result};
