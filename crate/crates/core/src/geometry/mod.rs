//! Lines, planes, rigid transforms and the generalized epipolar residual.

mod line;
mod plane;
mod procrustes;
mod transform;

pub use line::{
    closest_points, epipolar_residual, plucker_from_segment, segment_distance, transform_line,
    ClosestPoints, LineSegment3D, PluckerLine, MIN_SEGMENT_LENGTH,
};
pub use plane::{transform_plane, Plane};
pub use procrustes::{alignment_cost, fit_rigid_transform};
pub use transform::{nearest_rotation, rotation_angle, skew, RigidTransform};

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;
