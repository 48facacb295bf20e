use nalgebra::SymmetricEigen;

use crate::features::canonicalize_normal;
use crate::geometry::{Mat3, Vec3};

const K: usize = 3;
const MAX_ROUNDS: usize = 50;

/// Assignment of frame-A lines to three surface-normal directions.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalClusters {
    /// Cluster of each line; `None` for lines without a normal.
    pub labels: Vec<Option<usize>>,
    pub sizes: [usize; K],
    /// Unit cluster axes (sign is irrelevant).
    pub centers: [Vec3; K],
    /// Fewer than three usable directions: every normal sits in cluster 0,
    /// all weights are 1 and sampling is uniform.
    pub fallback: bool,
}

impl NormalClusters {
    pub fn clustered_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Weight of an inlier whose frame-A line is in `cluster`:
    /// `total / (3 · size)`, so equal clusters weigh 1. Unclustered lines and
    /// the fallback case weigh 1.
    pub fn weight(&self, cluster: Option<usize>) -> f64 {
        match cluster {
            Some(c) if !self.fallback && self.sizes[c] > 0 => {
                self.clustered_count() as f64 / (K as f64 * self.sizes[c] as f64)
            }
            _ => 1.0,
        }
    }
}

/// Axial spherical k-means (`k = 3`) on canonicalized normals.
///
/// Seeds are picked greedily as the most mutually orthogonal normals: the
/// first normal, the normal most orthogonal to it, then the one most
/// orthogonal to both. Assignment maximizes `|n · c|` (ties to the lower
/// cluster); each center is the principal axis of its members.
pub fn cluster_normals(normals: &[Option<Vec3>]) -> NormalClusters {
    let present: Vec<(usize, Vec3)> = normals
        .iter()
        .enumerate()
        .filter_map(|(i, n)| n.map(|n| (i, canonicalize_normal(n.normalize()))))
        .collect();
    let mut labels = vec![None; normals.len()];
    if present.len() < K {
        for (i, _) in &present {
            labels[*i] = Some(0);
        }
        return NormalClusters {
            labels,
            sizes: [present.len(), 0, 0],
            centers: [present.first().map_or(Vec3::z(), |p| p.1), Vec3::zeros(), Vec3::zeros()],
            fallback: true,
        };
    }

    let most_orthogonal = |to: &[Vec3]| -> Vec3 {
        present
            .iter()
            .map(|(_, n)| *n)
            .min_by(|a, b| {
                let fa = to.iter().map(|c| a.dot(c).abs()).fold(0.0, f64::max);
                let fb = to.iter().map(|c| b.dot(c).abs()).fold(0.0, f64::max);
                fa.total_cmp(&fb)
            })
            .unwrap_or_else(Vec3::z)
    };
    let c0 = present[0].1;
    let c1 = most_orthogonal(&[c0]);
    let c2 = most_orthogonal(&[c0, c1]);
    let mut centers = [c0, c1, c2];

    let assign = |centers: &[Vec3; K], n: &Vec3| -> usize {
        let mut best = 0;
        for c in 1..K {
            if n.dot(&centers[c]).abs() > n.dot(&centers[best]).abs() {
                best = c;
            }
        }
        best
    };
    let mut assignment: Vec<usize> = present.iter().map(|(_, n)| assign(&centers, n)).collect();
    for _ in 0..MAX_ROUNDS {
        for (c, center) in centers.iter_mut().enumerate() {
            let mut scatter = Mat3::zeros();
            let mut members = 0;
            for ((_, n), &a) in present.iter().zip(&assignment) {
                if a == c {
                    scatter += n * n.transpose();
                    members += 1;
                }
            }
            if members > 0 {
                let eig = SymmetricEigen::new(scatter);
                let axis = eig.eigenvectors.column(eig.eigenvalues.imax()).into_owned();
                *center = canonicalize_normal(axis);
            }
        }
        let next: Vec<usize> = present.iter().map(|(_, n)| assign(&centers, n)).collect();
        if next == assignment {
            break;
        }
        assignment = next;
    }

    let mut sizes = [0; K];
    for ((i, _), &a) in present.iter().zip(&assignment) {
        sizes[a] += 1;
        labels[*i] = Some(a);
    }
    let fallback = sizes.iter().any(|&s| s == 0);
    if fallback {
        for l in labels.iter_mut().flatten() {
            *l = 0;
        }
        sizes = [present.len(), 0, 0];
    }
    NormalClusters {
        labels,
        sizes,
        centers,
        fallback,
    }
}
