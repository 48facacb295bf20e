//! Raycasts one LiDAR sweep of the synthetic corridor, bins it into the
//! sensor grid, extracts H/V line segments, surface normals and planes, and
//! writes them as PLY.
//!
//! cargo run --example feature_fitting -- [out.ply]

use std::collections::BTreeMap;

use linereg::eval::{raycast_scene, scene_by_name, SensorModel};
use linereg::features::{FeatureParams, FrameFeatures};
use linereg::scan::{organize_lidar, write_ply};

fn main() -> linereg::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "corridor_features.ply".into());
    let spec = scene_by_name("corridor", 0.01, 3)?;
    let scan = raycast_scene(&spec.scene, &spec.start);
    println!("{} of {} cells hit the scene", scan.cloud.count_present(), scan.cloud.cells().len());

    // Re-binning the raw points reproduces the grid a real sensor driver
    // would hand over.
    let SensorModel::Lidar(grid) = spec.scene.sensor else {
        unreachable!("corridor is a LiDAR scene")
    };
    let cloud = organize_lidar(&scan.cloud.present_points(), &grid)?;

    let features = FrameFeatures::extract(&cloud, &FeatureParams::lidar());
    let with_normal = features
        .h_lines
        .iter()
        .chain(&features.v_lines)
        .filter(|l| l.normal.is_some())
        .count();
    println!(
        "{} H-lines, {} V-lines ({} with a surface normal), {} planes",
        features.h_lines.len(),
        features.v_lines.len(),
        with_normal,
        features.planes.len()
    );

    let mut buckets: BTreeMap<&str, usize> = BTreeMap::new();
    for l in features.h_lines.iter().chain(&features.v_lines) {
        let len = l.segment.length();
        let name = match len {
            _ if len < 1.0 => "a: under 1 m",
            _ if len < 5.0 => "b: 1-5 m",
            _ => "c: 5 m and longer",
        };
        *buckets.entry(name).or_default() += 1;
    }
    for (name, n) in buckets {
        println!("  segments {}: {n}", &name[3..]);
    }
    for p in &features.planes {
        println!(
            "  plane n = [{:+.3} {:+.3} {:+.3}], d = {:+.3}, {} inliers",
            p.plane.normal.x, p.plane.normal.y, p.plane.normal.z, p.plane.offset, p.inlier_count
        );
    }

    write_ply(&out, &features.to_ply())?;
    println!("wrote {out}");
    Ok(())
}
