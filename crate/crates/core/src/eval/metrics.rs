use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::RigidTransform;
use crate::registration::Trajectory;

/// Default segment lengths of the odometry benchmark (m).
pub const KITTI_SEGMENT_LENGTHS: [f64; 8] = [100.0, 200.0, 300.0, 400.0, 500.0, 600.0, 700.0, 800.0];

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PoseError {
    /// Meters.
    pub translation_err: f64,
    /// Degrees, in `[0, 180]`.
    pub rotation_err: f64,
}

impl PoseError {
    /// Error of `est` against `gt` as `gt⁻¹ ∘ est`.
    pub fn between(est: &RigidTransform, gt: &RigidTransform) -> Self {
        let e = gt.inverse().compose(est);
        Self {
            translation_err: e.translation.norm(),
            rotation_err: e.rotation_angle().to_degrees(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RpeReport {
    pub per_step: Vec<PoseError>,
    pub mean: PoseError,
    pub max: PoseError,
}

/// Per-step error between consecutive relative motions of `est` and `gt`,
/// matched by index.
pub fn relative_pose_error(est: &Trajectory, gt: &Trajectory) -> Result<RpeReport> {
    if est.len() != gt.len() {
        return Err(Error::InvalidInput(format!(
            "trajectory lengths differ: estimate has {} poses, ground truth {}",
            est.len(),
            gt.len()
        )));
    }
    let per_step: Vec<PoseError> = est
        .relative_steps()
        .iter()
        .zip(gt.relative_steps())
        .map(|(e, g)| PoseError::between(e, &g))
        .collect();
    let n = per_step.len().max(1) as f64;
    let mean = PoseError {
        translation_err: per_step.iter().map(|e| e.translation_err).sum::<f64>() / n,
        rotation_err: per_step.iter().map(|e| e.rotation_err).sum::<f64>() / n,
    };
    let max = PoseError {
        translation_err: per_step.iter().map(|e| e.translation_err).fold(0.0, f64::max),
        rotation_err: per_step.iter().map(|e| e.rotation_err).fold(0.0, f64::max),
    };
    Ok(RpeReport { per_step, mean, max })
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LengthErrors {
    pub length: f64,
    pub segments: usize,
    pub translation_percent: f64,
    pub rotation_deg_per_m: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SegmentErrors {
    /// Average over every evaluated segment.
    pub translation_percent: f64,
    pub rotation_deg_per_m: f64,
    pub segments: usize,
    /// Breakdown by segment length; lengths with no segment are omitted.
    pub per_length: Vec<LengthErrors>,
}

/// Drift per traveled distance over sub-trajectories of fixed ground-truth
/// arc length.
///
/// Every frame starts a segment for every length `L`; the segment ends at
/// the first frame whose ground-truth arc length from the start is at least
/// `L`. The error `Δest⁻¹ ∘ Δgt` of the segment's end pose contributes
/// `|t| / L` and `angle / L`. Returns `None` when no segment fits.
pub fn kitti_segment_errors(est: &Trajectory, gt: &Trajectory, lengths: &[f64]) -> Result<Option<SegmentErrors>> {
    if est.len() != gt.len() {
        return Err(Error::InvalidInput(format!(
            "trajectory lengths differ: estimate has {} poses, ground truth {}",
            est.len(),
            gt.len()
        )));
    }
    if let Some(l) = lengths.iter().find(|l| !(**l > 0.0)) {
        return Err(Error::InvalidInput(format!("segment length must be positive, got {l}")));
    }
    let dist = gt.arc_lengths();
    let mut per_length = Vec::new();
    let (mut t_sum, mut r_sum, mut count) = (0.0, 0.0, 0usize);
    for &len in lengths {
        let (mut t_len, mut r_len, mut n) = (0.0, 0.0, 0usize);
        for first in 0..gt.len() {
            let Some(last) = (first..gt.len()).find(|&j| dist[j] >= dist[first] + len) else {
                continue;
            };
            let d_gt = gt.relative(first, last);
            let d_est = est.relative(first, last);
            let err = d_est.inverse().compose(&d_gt);
            t_len += err.translation.norm() / len;
            r_len += err.rotation_angle().to_degrees() / len;
            n += 1;
        }
        if n > 0 {
            per_length.push(LengthErrors {
                length: len,
                segments: n,
                translation_percent: 100.0 * t_len / n as f64,
                rotation_deg_per_m: r_len / n as f64,
            });
            t_sum += t_len;
            r_sum += r_len;
            count += n;
        }
    }
    if count == 0 {
        return Ok(None);
    }
    Ok(Some(SegmentErrors {
        translation_percent: 100.0 * t_sum / count as f64,
        rotation_deg_per_m: r_sum / count as f64,
        segments: count,
        per_length,
    }))
}

/// Per-step RPE rows as CSV.
pub fn rpe_csv(report: &RpeReport) -> String {
    let mut s = String::from("step,translation_err_m,rotation_err_deg\n");
    for (k, e) in report.per_step.iter().enumerate() {
        let _ = writeln!(s, "{},{},{}", k + 1, e.translation_err, e.rotation_err);
    }
    s
}

/// Human-readable table in the layout
/// `mean tra. err. | mean rot. err. | max tra. err. | max rot. err.`,
/// followed by segment errors when available.
pub fn summary_table(name: &str, rpe: Option<&RpeReport>, segments: Option<&SegmentErrors>) -> String {
    let mut s = String::new();
    if let Some(r) = rpe {
        let _ = writeln!(
            s,
            "{:<16} {:>18} {:>20} {:>17} {:>19}",
            "sequence", "mean tra. err. [m]", "mean rot. err. [deg]", "max tra. err. [m]", "max rot. err. [deg]"
        );
        let _ = writeln!(
            s,
            "{:<16} {:>18.6} {:>20.6} {:>17.6} {:>19.6}",
            name, r.mean.translation_err, r.mean.rotation_err, r.max.translation_err, r.max.rotation_err
        );
    }
    if let Some(g) = segments {
        let _ = writeln!(s, "{:<16} {:>18} {:>20} {:>17}", "sequence", "tra. err. [%]", "rot. err. [deg/m]", "segments");
        let _ = writeln!(
            s,
            "{:<16} {:>18.6} {:>20.6} {:>17}",
            name, g.translation_percent, g.rotation_deg_per_m, g.segments
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec3;

    fn straight(n: usize, step: f64) -> Trajectory {
        Trajectory::from_poses(
            (0..n)
                .map(|k| RigidTransform::from_translation(Vec3::new(step * k as f64, 0.0, 0.0)))
                .collect(),
        )
    }

    #[test]
    fn self_error_is_zero() {
        let t = straight(10, 1.0);
        let r = relative_pose_error(&t, &t).unwrap();
        assert!(r.per_step.iter().all(|e| e.translation_err == 0.0 && e.rotation_err == 0.0));
        let g = kitti_segment_errors(&t, &t, &[1.0, 2.0]).unwrap().unwrap();
        assert_eq!((g.translation_percent, g.rotation_deg_per_m), (0.0, 0.0));
    }

    #[test]
    fn constant_step_offset() {
        let gt = straight(6, 1.0);
        let est = Trajectory::from_poses(
            (0..6)
                .map(|k| RigidTransform::from_translation(Vec3::new(1.0 * k as f64, 0.01 * k as f64, 0.0)))
                .collect(),
        );
        let r = relative_pose_error(&est, &gt).unwrap();
        assert!((r.mean.translation_err - 0.01).abs() < 1e-15);
    }

    #[test]
    fn uniform_scale_drift_is_one_percent() {
        let gt = straight(21, 0.5);
        let est = straight(21, 0.505);
        let g = kitti_segment_errors(&est, &gt, &[1.0, 2.0, 4.0]).unwrap().unwrap();
        assert!((g.translation_percent - 1.0).abs() < 1e-9);
    }

    #[test]
    fn too_short_gives_none_and_mismatch_errors() {
        let t = straight(3, 1.0);
        assert_eq!(kitti_segment_errors(&t, &t, &[100.0]).unwrap(), None);
        assert!(relative_pose_error(&t, &straight(4, 1.0)).is_err());
    }
}
