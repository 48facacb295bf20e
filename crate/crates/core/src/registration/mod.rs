//! Candidate generation, normal clustering, RANSAC over the solvers and
//! trajectory chaining.

mod candidates;
mod clusters;
mod ransac;
mod trajectory;

pub use candidates::{
    candidate_line_pairs, candidate_plane_pairs, ConstraintSet, LineCandidate, PlaneCandidate,
};
pub use clusters::{cluster_normals, NormalClusters};
pub use ransac::{
    count_inliers, register_pair, sample_hypothesis, HypothesisSample, InlierScore, RansacConfig,
    Registration, RegistrationDiagnostics, RoundDiagnostics, SamplingPools, SolverKind,
};
pub use trajectory::{chain_trajectory, Trajectory, TrajectoryPose};
