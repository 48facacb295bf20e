use crate::geometry::RigidTransform;

/// One world-from-frame pose with its timestamp (frame index when the source
/// has no clock).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPose {
    pub stamp: f64,
    pub pose: RigidTransform,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub poses: Vec<TrajectoryPose>,
}

impl Trajectory {
    /// Poses stamped with their index.
    pub fn from_poses(poses: Vec<RigidTransform>) -> Self {
        Self {
            poses: poses
                .into_iter()
                .enumerate()
                .map(|(i, pose)| TrajectoryPose {
                    stamp: i as f64,
                    pose,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }

    pub fn pose(&self, k: usize) -> &RigidTransform {
        &self.poses[k].pose
    }

    /// Motion from frame `i` to frame `j` expressed in frame `i`:
    /// `pose(i)⁻¹ ∘ pose(j)`.
    pub fn relative(&self, i: usize, j: usize) -> RigidTransform {
        self.pose(i).inverse().compose(self.pose(j))
    }

    /// `relative(k − 1, k)` for every step.
    pub fn relative_steps(&self) -> Vec<RigidTransform> {
        (1..self.len()).map(|k| self.relative(k - 1, k)).collect()
    }

    /// Cumulative path length of the positions; entry 0 is zero.
    pub fn arc_lengths(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        let mut acc = 0.0;
        for (k, p) in self.poses.iter().enumerate() {
            if k > 0 {
                acc += (p.pose.translation - self.poses[k - 1].pose.translation).norm();
            }
            out.push(acc);
        }
        out
    }

    /// The same trajectory with every pose pre-multiplied by `t`.
    pub fn transformed(&self, t: &RigidTransform) -> Self {
        Self {
            poses: self
                .poses
                .iter()
                .map(|p| TrajectoryPose {
                    stamp: p.stamp,
                    pose: t.compose(&p.pose),
                })
                .collect(),
        }
    }
}

/// World poses from consecutive relative poses, where `relative[k]` maps
/// frame `k + 1` into frame `k`. The first frame defines the world.
pub fn chain_trajectory(relative: &[RigidTransform]) -> Trajectory {
    let mut poses = Vec::with_capacity(relative.len() + 1);
    poses.push(RigidTransform::identity());
    for rel in relative {
        let prev = poses.last().copied().unwrap_or_default();
        poses.push(prev.compose(rel).orthonormalized());
    }
    Trajectory::from_poses(poses)
}
