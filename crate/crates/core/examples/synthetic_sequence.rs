//! Registers a noisy synthetic depth-camera sequence of the box room and
//! reports the relative pose error against ground truth.
//!
//! cargo run --example synthetic_sequence -- [seed] [frames]

use std::time::Instant;

use linereg::eval::{raycast_scene_stream, relative_pose_error, scene_by_name, synthetic_trajectory, summary_table};
use linereg::features::{FeatureParams, FrameFeatures};
use linereg::registration::{chain_trajectory, register_pair, RansacConfig, SolverKind, Trajectory};
use linereg::scan::downsample;

fn main() -> linereg::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let frames: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let start = Instant::now();

    let spec = scene_by_name("box_room", 0.005, seed)?;
    let poses = synthetic_trajectory(&spec, frames, 2.0, 0.3, seed);
    let params = FeatureParams::depth_camera().with_seed(seed);
    let features: Vec<FrameFeatures> = poses
        .iter()
        .enumerate()
        .map(|(k, pose)| {
            let scan = raycast_scene_stream(&spec.scene, pose, k as u64);
            FrameFeatures::extract(&downsample(&scan.cloud, 10, 10), &params)
        })
        .collect();
    println!(
        "features: {:?} lines per frame ({:.2} s)",
        features.iter().map(FrameFeatures::line_count).collect::<Vec<_>>(),
        start.elapsed().as_secs_f64()
    );

    let mut cfg = RansacConfig::depth_camera(SolverKind::SevenLines);
    cfg.seed = seed;
    let mut relative = Vec::new();
    for k in 1..features.len() {
        let t = Instant::now();
        let reg = register_pair(&features[k], &features[k - 1], &cfg)?;
        let gt = poses[k - 1].inverse().compose(&poses[k]);
        let (rot, tra) = gt.error_to(&reg.transform);
        println!(
            "pair {k}: score {:.1}, {} inliers, error {:.3} deg / {:.1} mm ({:.2} s)",
            reg.score,
            reg.inliers,
            rot.to_degrees(),
            tra * 1e3,
            t.elapsed().as_secs_f64()
        );
        relative.push(reg.transform);
    }
    let est = chain_trajectory(&relative);
    let gt = Trajectory::from_poses(poses.iter().map(|p| poses[0].inverse().compose(p)).collect());
    let rpe = relative_pose_error(&est, &gt)?;
    print!("{}", summary_table("box_room", Some(&rpe), None));
    println!("total {:.1} s", start.elapsed().as_secs_f64());
    Ok(())
}
