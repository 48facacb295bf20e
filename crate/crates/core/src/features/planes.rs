use rand::seq::index::sample;

use super::{derived_rng, principal_axes, FittedPlane};
use crate::geometry::{Plane, Vec3};
use crate::scan::OrganizedCloud;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneFitParams {
    pub inlier_dist: f64,
    pub min_plane_inliers: usize,
    pub max_planes: usize,
    pub max_iterations: usize,
    pub confidence: f64,
    pub seed: u64,
}

impl PlaneFitParams {
    pub fn lidar() -> Self {
        Self {
            inlier_dist: 0.05,
            min_plane_inliers: 200,
            max_planes: 10,
            max_iterations: 500,
            confidence: 0.99,
            seed: 0,
        }
    }

    pub fn depth_camera() -> Self {
        Self {
            inlier_dist: 0.01,
            ..Self::lidar()
        }
    }

    /// Scales the inlier requirement for a cloud down-sampled by `factor` cells.
    pub fn downsampled(mut self, factor: usize) -> Self {
        self.min_plane_inliers = (self.min_plane_inliers / factor.max(1)).max(3);
        self
    }
}

/// Sequential RANSAC plane extraction over the present points.
///
/// Normals are oriented so the sensor origin lies on the positive side.
pub fn fit_planes(cloud: &OrganizedCloud, params: &PlaneFitParams) -> Vec<FittedPlane> {
    let mut remaining = cloud.present_points();
    let mut rng = derived_rng(params.seed, 0x504c_414e_4553);
    let mut out = Vec::new();
    while out.len() < params.max_planes && remaining.len() >= params.min_plane_inliers.max(3) {
        let Some(plane) = best_hypothesis(&remaining, params, &mut rng) else {
            break;
        };
        let Some((fitted, inliers)) = refine(&remaining, plane, params) else {
            break;
        };
        if fitted.inlier_count < params.min_plane_inliers {
            break;
        }
        let mut keep = inliers.into_iter().peekable();
        let mut idx = 0;
        remaining.retain(|_| {
            let drop = keep.peek() == Some(&idx);
            if drop {
                keep.next();
            }
            idx += 1;
            !drop
        });
        out.push(fitted);
    }
    out
}

fn count_inliers(points: &[Vec3], plane: &Plane, dist: f64) -> usize {
    points
        .iter()
        .filter(|p| plane.signed_distance(p).abs() <= dist)
        .count()
}

fn best_hypothesis(points: &[Vec3], params: &PlaneFitParams, rng: &mut impl rand::Rng) -> Option<Plane> {
    let n = points.len();
    let mut best: Option<(usize, Plane)> = None;
    let mut needed = params.max_iterations;
    let mut k = 0;
    while k < needed {
        k += 1;
        let idx = sample(rng, n, 3);
        let (a, b, c) = (points[idx.index(0)], points[idx.index(1)], points[idx.index(2)]);
        let normal = (b - a).cross(&(c - a));
        if normal.norm() < 1e-12 {
            continue;
        }
        let Ok(plane) = Plane::from_point_normal(&a, &normal) else {
            continue;
        };
        let count = count_inliers(points, &plane, params.inlier_dist);
        if best.as_ref().is_none_or(|(bc, _)| count > *bc) {
            best = Some((count, plane));
            let w = count as f64 / n as f64;
            let fail = 1.0 - w * w * w;
            if fail <= 0.0 {
                break;
            }
            let est = ((1.0 - params.confidence).ln() / fail.ln()).ceil();
            if est.is_finite() {
                needed = needed.min(est.max(1.0) as usize);
            }
        }
    }
    best.map(|(_, p)| p)
}

/// Least-squares refit over inliers, twice. Returns the plane and the sorted
/// indices of its final inliers.
fn refine(points: &[Vec3], mut plane: Plane, params: &PlaneFitParams) -> Option<(FittedPlane, Vec<usize>)> {
    let mut inliers = Vec::new();
    let mut centroid = Vec3::zeros();
    for _ in 0..2 {
        let idx: Vec<usize> = (0..points.len())
            .filter(|&i| plane.signed_distance(&points[i]).abs() <= params.inlier_dist)
            .collect();
        if idx.len() < 3 {
            return None;
        }
        let pts: Vec<Vec3> = idx.iter().map(|&i| points[i]).collect();
        let (c, _, axes) = principal_axes(&pts);
        plane = Plane::from_point_normal(&c, &axes[0]).ok()?;
        centroid = c;
        inliers = idx;
    }
    inliers.retain(|&i| plane.signed_distance(&points[i]).abs() <= params.inlier_dist);
    if plane.offset < 0.0 {
        plane = plane.flipped();
    }
    Some((
        FittedPlane {
            plane,
            centroid,
            inlier_count: inliers.len(),
        },
        inliers,
    ))
}
