//! Organized point clouds and sensor/file ingestion.

mod depth;
mod kv;
mod lidar;
mod ply;
mod trajectory_io;

pub use depth::{
    depth_to_cloud, load_depth_image, save_depth_image, DepthImage, DepthIntrinsics,
};
pub use kv::KeyValueFile;
pub use lidar::{load_kitti_bin, organize_lidar, write_kitti_bin, GridConfig};
pub use ply::{write_ply, PlyData};
pub use trajectory_io::{
    read_trajectory, write_trajectory, TrajectoryFormat,
};

use crate::geometry::{RigidTransform, Vec3};

/// Row-major grid of optional points. Rows are horizontal scan-lines and
/// columns vertical ones; absent returns are `None`, never zero-filled.
#[derive(Clone, Debug, PartialEq)]
pub struct OrganizedCloud {
    rows: usize,
    cols: usize,
    points: Vec<Option<Vec3>>,
    pub frame_id: String,
}

impl OrganizedCloud {
    pub fn new(rows: usize, cols: usize, frame_id: impl Into<String>) -> Self {
        Self {
            rows,
            cols,
            points: vec![None; rows * cols],
            frame_id: frame_id.into(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Option<Vec3> {
        self.points[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, p: Option<Vec3>) {
        self.points[row * self.cols + col] = p;
    }

    pub fn cells(&self) -> &[Option<Vec3>] {
        &self.points
    }

    /// Present points with their `(row, col)`.
    pub fn iter_present(&self) -> impl Iterator<Item = (usize, usize, Vec3)> + '_ {
        self.points
            .iter()
            .enumerate()
            .filter_map(move |(i, p)| p.map(|p| (i / self.cols, i % self.cols, p)))
    }

    pub fn present_points(&self) -> Vec<Vec3> {
        self.points.iter().flatten().copied().collect()
    }

    pub fn count_present(&self) -> usize {
        self.points.iter().filter(|p| p.is_some()).count()
    }

    pub fn transformed(&self, t: &RigidTransform) -> OrganizedCloud {
        OrganizedCloud {
            rows: self.rows,
            cols: self.cols,
            points: self.points.iter().map(|p| p.map(|p| t.apply(&p))).collect(),
            frame_id: self.frame_id.clone(),
        }
    }
}

/// Keeps cells whose row and column indices are multiples of the steps.
pub fn downsample(cloud: &OrganizedCloud, row_step: usize, col_step: usize) -> OrganizedCloud {
    let row_step = row_step.max(1);
    let col_step = col_step.max(1);
    let rows = cloud.rows.div_ceil(row_step);
    let cols = cloud.cols.div_ceil(col_step);
    let mut out = OrganizedCloud::new(rows, cols, cloud.frame_id.clone());
    for r in 0..rows {
        for c in 0..cols {
            out.set(r, c, cloud.get(r * row_step, c * col_step));
        }
    }
    out
}
