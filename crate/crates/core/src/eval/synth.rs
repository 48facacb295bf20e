use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::features::derived_rng;
use crate::geometry::{Mat3, RigidTransform, Vec3};
use crate::scan::{DepthImage, DepthIntrinsics, GridConfig, OrganizedCloud};

/// Rectangle `origin + a u + b v` for `a, b ∈ [0, 1]`, with `u ⟂ v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Patch {
    pub origin: Vec3,
    pub u: Vec3,
    pub v: Vec3,
}

impl Patch {
    pub fn new(origin: Vec3, u: Vec3, v: Vec3) -> Result<Self> {
        let (lu, lv) = (u.norm(), v.norm());
        if !(lu > 1e-9 && lv > 1e-9) || u.dot(&v).abs() > 1e-9 * lu * lv {
            return Err(Error::InvalidInput("patch edges must be non-zero and perpendicular".into()));
        }
        Ok(Self { origin, u, v })
    }

    pub fn normal(&self) -> Vec3 {
        self.u.cross(&self.v).normalize()
    }

    /// Ray parameter of the hit, if the ray meets the rectangle ahead of its origin.
    pub fn intersect(&self, origin: &Vec3, dir: &Vec3) -> Option<f64> {
        let n = self.u.cross(&self.v);
        let denom = n.dot(dir);
        if denom.abs() < 1e-12 * n.norm() * dir.norm() {
            return None;
        }
        let t = n.dot(&(self.origin - origin)) / denom;
        if t <= 1e-9 {
            return None;
        }
        self.contains(&(origin + dir * t)).then_some(t)
    }

    /// Whether a point of the patch's plane lies inside the rectangle.
    pub fn contains(&self, p: &Vec3) -> bool {
        let d = p - self.origin;
        let a = d.dot(&self.u) / self.u.norm_squared();
        let b = d.dot(&self.v) / self.v.norm_squared();
        (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SensorModel {
    Lidar(GridConfig),
    /// Pinhole depth camera: x right, y down, z forward.
    Depth {
        intrinsics: DepthIntrinsics,
        width: usize,
        height: usize,
    },
}

impl SensorModel {
    pub fn grid_size(&self) -> (usize, usize) {
        match self {
            Self::Lidar(g) => (g.elevation_bins, g.azimuth_bins),
            Self::Depth { width, height, .. } => (*height, *width),
        }
    }

    /// Unit ray of a grid cell in the sensor frame.
    pub fn ray(&self, row: usize, col: usize) -> Vec3 {
        match self {
            Self::Lidar(g) => g.ray_direction(row, col),
            Self::Depth { intrinsics, .. } => intrinsics.ray(col, row).normalize(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticScene {
    pub name: String,
    pub patches: Vec<Patch>,
    pub sensor: SensorModel,
    /// Standard deviation of the range noise (m).
    pub noise_sigma: f64,
    pub seed: u64,
}

/// A raycast scan: points in the sensor frame plus the patch each cell hit.
#[derive(Clone, Debug, PartialEq)]
pub struct Raycast {
    pub cloud: OrganizedCloud,
    pub patch_ids: Vec<Option<usize>>,
}

/// Scan of `scene` from the sensor pose `pose` (world from sensor), using
/// noise stream 0.
pub fn raycast_scene(scene: &SyntheticScene, pose: &RigidTransform) -> Raycast {
    raycast_scene_stream(scene, pose, 0)
}

/// As [`raycast_scene`], drawing range noise from the given stream so that
/// different frames get independent noise.
pub fn raycast_scene_stream(scene: &SyntheticScene, pose: &RigidTransform, stream: u64) -> Raycast {
    let (rows, cols) = scene.sensor.grid_size();
    let noise = Normal::new(0.0, scene.noise_sigma.max(0.0)).ok();
    let per_row: Vec<Vec<Option<(Vec3, usize)>>> = (0..rows)
        .into_par_iter()
        .map(|row| {
            let mut rng = derived_rng(scene.seed, (stream << 24) | row as u64);
            (0..cols)
                .map(|col| {
                    let dir = scene.sensor.ray(row, col);
                    let world_dir = pose.rotation * dir;
                    let hit = scene
                        .patches
                        .iter()
                        .enumerate()
                        .filter_map(|(k, p)| p.intersect(&pose.translation, &world_dir).map(|t| (t, k)))
                        .min_by(|a, b| a.0.total_cmp(&b.0));
                    hit.map(|(t, k)| {
                        let r = match &noise {
                            Some(n) if scene.noise_sigma > 0.0 => t + n.sample(&mut rng),
                            _ => t,
                        };
                        (dir * r, k)
                    })
                })
                .collect()
        })
        .collect();
    let mut cloud = OrganizedCloud::new(rows, cols, scene.name.clone());
    let mut patch_ids = vec![None; rows * cols];
    for (row, cells) in per_row.into_iter().enumerate() {
        for (col, cell) in cells.into_iter().enumerate() {
            if let Some((p, k)) = cell {
                cloud.set(row, col, Some(p));
                patch_ids[row * cols + col] = Some(k);
            }
        }
    }
    Raycast { cloud, patch_ids }
}

/// Depth image of a pinhole raycast (z-depth in raw units); `None` for a
/// LiDAR sensor.
pub fn to_depth_image(scene: &SyntheticScene, scan: &Raycast) -> Option<DepthImage> {
    let SensorModel::Depth { intrinsics, width, height } = scene.sensor else {
        return None;
    };
    let mut img = DepthImage::new(width, height);
    for (v, u, p) in scan.cloud.iter_present() {
        img.set(u, v, (p.z * intrinsics.depth_scale).round().clamp(0.0, u16::MAX as f64));
    }
    Some(img)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanPair {
    pub a: Raycast,
    pub b: Raycast,
    /// Maps frame-A coordinates into frame B: `pose_b⁻¹ ∘ pose_a`.
    pub gt_relative: RigidTransform,
}

pub fn make_scan_pair(scene: &SyntheticScene, pose_a: &RigidTransform, pose_b: &RigidTransform) -> ScanPair {
    ScanPair {
        a: raycast_scene_stream(scene, pose_a, 0),
        b: raycast_scene_stream(scene, pose_b, 1),
        gt_relative: pose_b.inverse().compose(pose_a),
    }
}

pub const SCENE_NAMES: [&str; 3] = ["box_room", "corridor", "street"];

/// A named scene with a starting sensor pose and a direction of travel.
#[derive(Clone, Debug, PartialEq)]
pub struct SceneSpec {
    pub scene: SyntheticScene,
    pub start: RigidTransform,
    pub travel: Vec3,
}

pub fn scene_by_name(name: &str, noise_sigma: f64, seed: u64) -> Result<SceneSpec> {
    let mut spec = match name {
        "box_room" => box_room(),
        "corridor" => corridor(),
        "street" => street(),
        _ => {
            return Err(Error::UnknownScene {
                name: name.to_string(),
                available: SCENE_NAMES.join(", "),
            })
        }
    };
    spec.scene.noise_sigma = noise_sigma;
    spec.scene.seed = seed;
    Ok(spec)
}

fn patch(origin: [f64; 3], u: [f64; 3], v: [f64; 3]) -> Patch {
    Patch::new(Vec3::from(origin), Vec3::from(u), Vec3::from(v)).expect("scene patches are rectangles")
}

/// World-from-camera rotation of a pinhole camera looking along `heading`
/// (radians from +x) tilted down by `pitch`.
pub fn camera_rotation(heading: f64, pitch: f64) -> Mat3 {
    let forward = Vec3::new(pitch.cos() * heading.cos(), pitch.cos() * heading.sin(), -pitch.sin());
    let right = Vec3::new(heading.sin(), -heading.cos(), 0.0);
    let down = forward.cross(&right);
    Mat3::from_columns(&[right, down, forward])
}

/// 8 × 6 × 3 m room without a ceiling (floor and four walls), seen by a
/// 640 × 480 depth camera looking into a corner.
pub fn box_room() -> SceneSpec {
    let (hx, hy, h) = (4.0, 3.0, 3.0);
    let patches = vec![
        patch([-hx, -hy, 0.0], [2.0 * hx, 0.0, 0.0], [0.0, 2.0 * hy, 0.0]),
        patch([hx, -hy, 0.0], [0.0, 2.0 * hy, 0.0], [0.0, 0.0, h]),
        patch([-hx, -hy, 0.0], [0.0, 2.0 * hy, 0.0], [0.0, 0.0, h]),
        patch([-hx, hy, 0.0], [2.0 * hx, 0.0, 0.0], [0.0, 0.0, h]),
        patch([-hx, -hy, 0.0], [2.0 * hx, 0.0, 0.0], [0.0, 0.0, h]),
    ];
    SceneSpec {
        scene: SyntheticScene {
            name: "box_room".into(),
            patches,
            sensor: SensorModel::Depth {
                intrinsics: DepthIntrinsics::default(),
                width: 640,
                height: 480,
            },
            noise_sigma: 0.0,
            seed: 0,
        },
        start: RigidTransform::new(
            camera_rotation(30f64.to_radians(), 15f64.to_radians()),
            Vec3::new(-1.5, -1.0, 1.2),
        ),
        travel: Vec3::new(20f64.to_radians().cos(), 20f64.to_radians().sin(), 0.0),
    }
}

/// Compact spinning LiDAR used by the outdoor scenes: 32 rows over
/// +10°..-30°, 720 columns over the full turn.
pub fn compact_lidar() -> GridConfig {
    GridConfig {
        azimuth_bins: 720,
        elevation_bins: 32,
        elevation_min: (-30f64).to_radians(),
        elevation_max: 10f64.to_radians(),
        ..GridConfig::default()
    }
}

/// 40 m corridor, 3 m wide and 3 m tall: floor and two side walls.
pub fn corridor() -> SceneSpec {
    let patches = vec![
        patch([-20.0, -1.5, 0.0], [40.0, 0.0, 0.0], [0.0, 3.0, 0.0]),
        patch([-20.0, -1.5, 0.0], [40.0, 0.0, 0.0], [0.0, 0.0, 3.0]),
        patch([-20.0, 1.5, 0.0], [40.0, 0.0, 0.0], [0.0, 0.0, 3.0]),
    ];
    SceneSpec {
        scene: SyntheticScene {
            name: "corridor".into(),
            patches,
            sensor: SensorModel::Lidar(compact_lidar()),
            noise_sigma: 0.0,
            seed: 0,
        },
        start: RigidTransform::from_translation(Vec3::new(-5.0, 0.0, 1.2)),
        travel: Vec3::x(),
    }
}

/// Road with building facades on both sides, broken by cross streets whose
/// end walls face along the road.
pub fn street() -> SceneSpec {
    let mut patches = vec![patch([-40.0, -12.0, 0.0], [80.0, 0.0, 0.0], [0.0, 24.0, 0.0])];
    for k in 0..4 {
        let x0 = -40.0 + 20.0 * k as f64;
        let (y_left, y_right) = (8.0 + (k % 2) as f64, -7.0 - ((k + 1) % 2) as f64);
        patches.push(patch([x0, y_left, 0.0], [14.0, 0.0, 0.0], [0.0, 0.0, 10.0]));
        patches.push(patch([x0, y_right, 0.0], [14.0, 0.0, 0.0], [0.0, 0.0, 8.0]));
        // Facade ends facing along the road.
        patches.push(patch([x0 + 14.0, y_left, 0.0], [0.0, 4.0, 0.0], [0.0, 0.0, 10.0]));
        patches.push(patch([x0 + 14.0, y_right - 4.0, 0.0], [0.0, 4.0, 0.0], [0.0, 0.0, 8.0]));
    }
    SceneSpec {
        scene: SyntheticScene {
            name: "street".into(),
            patches,
            sensor: SensorModel::Lidar(compact_lidar()),
            noise_sigma: 0.0,
            seed: 0,
        },
        start: RigidTransform::from_translation(Vec3::new(-15.0, 0.0, 1.7)),
        travel: Vec3::x(),
    }
}

/// World-from-sensor poses starting at `spec.start`.
///
/// Each step turns by about `step_deg` about an axis within a few degrees of
/// vertical and moves about `step_m` along the direction of travel; the
/// jitter (±10 % in magnitude, ±3° in axis tilt) is drawn from `seed`.
pub fn synthetic_trajectory(spec: &SceneSpec, frames: usize, step_deg: f64, step_m: f64, seed: u64) -> Vec<RigidTransform> {
    let mut rng = derived_rng(seed, 0x7472_616a);
    let mut poses = Vec::with_capacity(frames);
    let mut pose = spec.start;
    let travel = spec.travel.normalize();
    for k in 0..frames {
        if k > 0 {
            let tilt = 3f64.to_radians();
            let axis = Vec3::new(rng.random_range(-tilt..tilt), rng.random_range(-tilt..tilt), 1.0);
            let angle = step_deg.to_radians() * rng.random_range(0.9..1.1);
            let turn = RigidTransform::from_axis_angle(&axis, angle, Vec3::zeros());
            let side = Vec3::z().cross(&travel);
            let dir = (travel + side * rng.random_range(-0.1..0.1)).normalize();
            pose = RigidTransform::new(
                turn.rotation * pose.rotation,
                pose.translation + dir * step_m * rng.random_range(0.9..1.1),
            )
            .orthonormalized();
        }
        poses.push(pose);
    }
    poses
}
