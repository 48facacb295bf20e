//! Registration of sparse 3D scans (LiDAR sweeps or depth images) from
//! intersections of scan-line segments and plane correspondences.

pub mod ap;
pub mod cli;
pub mod error;
pub mod eval;
pub mod features;
pub mod geometry;
pub mod minimal;
pub mod registration;
pub mod scan;

pub use error::{Error, Result};
