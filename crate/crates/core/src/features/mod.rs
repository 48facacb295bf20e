//! Piecewise-linear scan-line segments (H-lines / V-lines), planes and
//! per-line surface normals.

mod lines;
mod normals;
mod planes;

pub use lines::{fit_scanline_segments, fit_scanlines, scan_lines, LineFitParams};
pub use normals::{canonicalize_normal, estimate_line_normals, MIN_NORMAL_PAIR_SIN};
pub use planes::{fit_planes, PlaneFitParams};

use nalgebra::SymmetricEigen;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{LineSegment3D, Mat3, Plane, PluckerLine, Vec3};
use crate::scan::{OrganizedCloud, PlyData};

/// Which family of scan-lines a line came from. This says nothing about the
/// line's 3D orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// Present points of one grid row (horizontal) or column (vertical), ordered
/// by their position along the scan-line.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanLine {
    pub orientation: Orientation,
    pub index: usize,
    pub points: Vec<(usize, Vec3)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FittedLine {
    pub segment: LineSegment3D,
    pub plucker: PluckerLine,
    pub orientation: Orientation,
    /// Unit normal of the surface the line lies on, when a crossing partner exists.
    pub normal: Option<Vec3>,
    pub inlier_count: usize,
    pub source_scanline: (Orientation, usize),
    /// Positions along the source scan-line of the claimed inliers.
    pub inlier_positions: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FittedPlane {
    pub plane: Plane,
    pub centroid: Vec3,
    pub inlier_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeatureParams {
    pub lines: LineFitParams,
    pub planes: PlaneFitParams,
    /// Maximum H/V segment distance for a normal-estimation partner.
    pub normal_pair_dist: f64,
}

impl FeatureParams {
    pub fn lidar() -> Self {
        let lines = LineFitParams::lidar();
        Self {
            normal_pair_dist: 2.0 * lines.inlier_dist,
            lines,
            planes: PlaneFitParams::lidar(),
        }
    }

    pub fn depth_camera() -> Self {
        let lines = LineFitParams::depth_camera();
        Self {
            normal_pair_dist: 2.0 * lines.inlier_dist,
            lines,
            planes: PlaneFitParams::depth_camera(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.lines.seed = seed;
        self.planes.seed = seed;
        self
    }
}

/// Everything the registration stage needs from one frame.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FrameFeatures {
    pub h_lines: Vec<FittedLine>,
    pub v_lines: Vec<FittedLine>,
    pub planes: Vec<FittedPlane>,
}

impl FrameFeatures {
    pub fn extract(cloud: &OrganizedCloud, params: &FeatureParams) -> Self {
        let mut h_lines = fit_scanlines(cloud, Orientation::Horizontal, &params.lines);
        let mut v_lines = fit_scanlines(cloud, Orientation::Vertical, &params.lines);
        estimate_line_normals(&mut h_lines, &mut v_lines, params.normal_pair_dist);
        let planes = fit_planes(cloud, &params.planes);
        Self {
            h_lines,
            v_lines,
            planes,
        }
    }

    pub fn line_count(&self) -> usize {
        self.h_lines.len() + self.v_lines.len()
    }

    /// Segments as a labelled PLY: label 0 for H-lines, 1 for V-lines;
    /// planes are single vertices at their centroids carrying the normal,
    /// labelled `100 + k`.
    pub fn to_ply(&self) -> PlyData {
        let mut ply = PlyData::default();
        let mut labels = Vec::new();
        let mut normals = Vec::new();
        for (label, lines) in [(0, &self.h_lines), (1, &self.v_lines)] {
            for l in lines.iter() {
                let i = ply.vertices.len();
                for p in l.segment.endpoints() {
                    ply.vertices.push(p);
                    labels.push(label);
                    normals.push(l.normal.unwrap_or_else(Vec3::zeros));
                }
                ply.edges.push((i, i + 1, label));
            }
        }
        for (k, p) in self.planes.iter().enumerate() {
            ply.vertices.push(p.centroid);
            labels.push(100 + k as i32);
            normals.push(p.plane.normal);
        }
        ply.labels = Some(labels);
        ply.normals = Some(normals);
        ply
    }
}

/// Per-item RNG derived from a master seed.
pub(crate) fn derived_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

/// Centroid and principal axes of a point set, eigenvalues ascending.
pub(crate) fn principal_axes(points: &[Vec3]) -> (Vec3, [f64; 3], [Vec3; 3]) {
    let n = points.len().max(1) as f64;
    let centroid = points.iter().sum::<Vec3>() / n;
    let mut scatter = Mat3::zeros();
    for p in points {
        let d = p - centroid;
        scatter += d * d.transpose();
    }
    let eig = SymmetricEigen::new(scatter);
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = idx.map(|i| eig.eigenvalues[i]);
    let vectors = idx.map(|i| eig.eigenvectors.column(i).into_owned());
    (centroid, values, vectors)
}
