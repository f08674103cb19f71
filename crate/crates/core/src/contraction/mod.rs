//! The contraction of the well-rounded retracts onto the center of the
//! fundamental cell, traced exactly on sample points and `𝒞`-cells.

pub mod chain;
pub mod geom;
pub mod lift;
pub mod plan;
pub mod subdivision;
pub mod sweep;
pub mod trace;
pub mod w2;

pub use plan::{center_target, classify_tiers, CenterTarget, CubePlan, PhaseKind, TargetCase, Tier};
pub use subdivision::{subdivision, triangulate_cube, Subdivision, Tetra};
pub use trace::{h3_schedule, trace_h3, trace_in_cube, Piece, TraceContext, Trajectory};
