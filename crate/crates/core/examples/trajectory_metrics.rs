//! Chains noisy relative motions into a trajectory, writes it in both
//! trajectory formats and scores it with the relative pose error and
//! distance-normalized segment drift.
//!
//! cargo run --example trajectory_metrics -- [out_dir]

use std::path::PathBuf;

use linereg::eval::{kitti_segment_errors, relative_pose_error, summary_table};
use linereg::geometry::{RigidTransform, Vec3};
use linereg::registration::chain_trajectory;
use linereg::scan::{read_trajectory, write_trajectory, TrajectoryFormat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> linereg::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    // A gently curving drive: 1 m forward and 1° of yaw per frame.
    let step = RigidTransform::from_axis_angle(&Vec3::z(), 1f64.to_radians(), Vec3::new(1.0, 0.0, 0.0));
    let gt = chain_trajectory(&vec![step; 200]);

    // The estimate perturbs every step by up to 0.05° and 1 cm.
    let noisy: Vec<RigidTransform> = gt
        .relative_steps()
        .iter()
        .map(|s| {
            let axis = Vec3::new(rng.random(), rng.random(), rng.random()) - Vec3::repeat(0.5);
            let shift = Vec3::new(rng.random(), rng.random(), rng.random()) - Vec3::repeat(0.5);
            let noise = RigidTransform::from_axis_angle(&axis.normalize(), rng.random_range(0.0..0.05f64).to_radians(), shift * 0.02);
            s.compose(&noise)
        })
        .collect();
    let est = chain_trajectory(&noisy);

    let header = vec!["example = trajectory_metrics".to_string(), "seed = 9".to_string()];
    let tum = out.join("example_tum.txt");
    let kitti = out.join("example_kitti.txt");
    write_trajectory(&tum, &est, TrajectoryFormat::Tum, &header)?;
    write_trajectory(&kitti, &est, TrajectoryFormat::Kitti, &header)?;
    let reread = read_trajectory(&kitti, TrajectoryFormat::Kitti)?;
    println!("wrote {} and {}", tum.display(), kitti.display());

    let rpe = relative_pose_error(&reread, &gt)?;
    let segments = kitti_segment_errors(&reread, &gt, &[25.0, 50.0, 100.0])?;
    print!("{}", summary_table("curve", Some(&rpe), segments.as_ref()));
    Ok(())
}
