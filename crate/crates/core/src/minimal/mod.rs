//! Closed-form minimal solvers that combine line intersections with plane
//! correspondences, and the quartic root finder they share.

mod canonical;
mod quartic;
mod solvers;

pub use canonical::{
    canonicalize_1l2p, canonicalize_3l1p, CanonicalFrames, MIN_PLANE_PAIR_SIN,
};
pub use quartic::{solve_quartic, Quartic};
pub use solvers::{solve_1l2p, solve_3l1p, PoseCandidateSet};
