use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{Quaternion, UnitQuaternion};

use crate::error::{Error, Result};
use crate::geometry::{RigidTransform, Vec3};
use crate::registration::{Trajectory, TrajectoryPose};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrajectoryFormat {
    /// `timestamp tx ty tz qx qy qz qw`
    Tum,
    /// Twelve floats of a row-major 3×4 pose matrix.
    Kitti,
}

impl FromStr for TrajectoryFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "tum" => Ok(Self::Tum),
            "kitti" => Ok(Self::Kitti),
            other => Err(format!("unknown trajectory format `{other}` (tum, kitti)")),
        }
    }
}

impl TrajectoryFormat {
    pub fn render(&self, traj: &Trajectory, header: &[String]) -> String {
        let mut s = String::new();
        for h in header {
            for line in h.lines() {
                let _ = writeln!(s, "# {line}");
            }
        }
        for p in &traj.poses {
            match self {
                Self::Tum => {
                    let t = p.pose.translation;
                    let mut q = p.pose.quaternion().into_inner();
                    if q.w < 0.0 {
                        q = -q;
                    }
                    let _ = writeln!(
                        s,
                        "{} {} {} {} {} {} {} {}",
                        p.stamp, t.x, t.y, t.z, q.i, q.j, q.k, q.w
                    );
                }
                Self::Kitti => {
                    let v = p.pose.to_row_major_3x4();
                    let row: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                    let _ = writeln!(s, "{}", row.join(" "));
                }
            }
        }
        s
    }

    pub fn parse(&self, text: &str, path: &Path) -> Result<Trajectory> {
        let mut poses = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let values: Vec<f64> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .map_err(|_| Error::parse(path, i + 1, format!("not a number: `{tok}`")))
                })
                .collect::<Result<_>>()?;
            let pose = match self {
                Self::Tum => {
                    if values.len() != 8 {
                        return Err(Error::parse(
                            path,
                            i + 1,
                            format!("expected 8 values (timestamp tx ty tz qx qy qz qw), got {}", values.len()),
                        ));
                    }
                    let q = Quaternion::new(values[7], values[4], values[5], values[6]);
                    if !(q.norm() > 1e-9) {
                        return Err(Error::parse(path, i + 1, "zero quaternion"));
                    }
                    TrajectoryPose {
                        stamp: values[0],
                        pose: RigidTransform::from_quaternion(
                            &UnitQuaternion::from_quaternion(q),
                            Vec3::new(values[1], values[2], values[3]),
                        ),
                    }
                }
                Self::Kitti => {
                    let arr: [f64; 12] = values.as_slice().try_into().map_err(|_| {
                        Error::parse(path, i + 1, format!("expected 12 values, got {}", values.len()))
                    })?;
                    TrajectoryPose {
                        stamp: poses.len() as f64,
                        pose: RigidTransform::from_row_major_3x4(&arr),
                    }
                }
            };
            poses.push(pose);
        }
        Ok(Trajectory { poses })
    }
}

pub fn write_trajectory(
    path: impl AsRef<Path>,
    traj: &Trajectory,
    format: TrajectoryFormat,
    header: &[String],
) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format.render(traj, header)).map_err(|e| Error::io(path, e))
}

pub fn read_trajectory(path: impl AsRef<Path>, format: TrajectoryFormat) -> Result<Trajectory> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    format.parse(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Trajectory {
        Trajectory::from_poses(vec![
            RigidTransform::identity(),
            RigidTransform::from_axis_angle(&Vec3::new(0.1, 0.2, 1.0), 0.3, Vec3::new(1.0, -2.0, 0.5)),
        ])
    }

    #[test]
    fn both_formats_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for fmt in [TrajectoryFormat::Tum, TrajectoryFormat::Kitti] {
            let path = dir.path().join("traj.txt");
            write_trajectory(&path, &sample(), fmt, &["seed = 1".to_string()]).unwrap();
            let back = read_trajectory(&path, fmt).unwrap();
            assert_eq!(back.len(), 2);
            for (a, b) in back.poses.iter().zip(&sample().poses) {
                assert!(a.pose.max_abs_diff(&b.pose) < 1e-12);
            }
        }
    }

    #[test]
    fn malformed_line_is_cited() {
        let mut text = String::from("# header\n");
        for i in 0..15 {
            text.push_str(&format!("{i} 0 0 0 0 0 0 1\n"));
        }
        text.push_str("15 0 0 zero 0 0 0 1\n");
        let err = TrajectoryFormat::Tum.parse(&text, Path::new("est.txt")).unwrap_err();
        assert!(err.to_string().contains("est.txt:17:"), "{err}");
        let err = TrajectoryFormat::Kitti.parse("1 0 0\n", Path::new("k.txt")).unwrap_err();
        assert!(err.to_string().contains("k.txt:1:"), "{err}");
    }
}
