//! Relative pose from seven intersecting segment pairs by alternating
//! projection, with the per-sweep convergence trace, and the degeneracy
//! diagnostic on a pencil of lines through one common line.
//!
//! cargo run --release --example alternating_projection -- [trace.csv]

use linereg::ap::{solve_ap, ApConfig, SegmentPairSet};
use linereg::geometry::{LineSegment3D, RigidTransform, Vec3};

fn segment(center: Vec3, dir: Vec3, len: f64) -> LineSegment3D {
    let half = dir.normalize() * (0.5 * len);
    LineSegment3D::new(center - half, center + half).expect("nonzero length")
}

/// A pair of segments crossing at `x` once frame 1 is moved by `truth`.
fn crossing(truth: &RigidTransform, x: Vec3, d1: Vec3, d2: Vec3) -> (LineSegment3D, LineSegment3D) {
    (segment(x + d1 * 0.2, d1, 2.0), segment(truth.apply(&x) - d2 * 0.3, d2, 2.0))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trace_path = std::env::args().nth(1);
    let truth = RigidTransform::from_axis_angle(&Vec3::new(0.1, 0.2, 1.0).normalize(), 0.1, Vec3::new(0.2, -0.1, 0.05));

    // Edges on a floor (normal z) and two walls (normals x and y).
    let pairs = vec![
        crossing(&truth, Vec3::new(0.5, 0.5, 0.0), Vec3::x(), Vec3::y()),
        crossing(&truth, Vec3::new(-1.0, 1.5, 0.0), Vec3::new(1.0, 1.0, 0.0), Vec3::new(1.0, -1.0, 0.0)),
        crossing(&truth, Vec3::new(2.0, 0.0, 1.0), Vec3::y(), Vec3::z()),
        crossing(&truth, Vec3::new(2.0, -1.0, 0.3), Vec3::new(0.0, 1.0, 1.0), Vec3::new(0.0, 1.0, -1.0)),
        crossing(&truth, Vec3::new(0.0, 2.0, 1.5), Vec3::x(), Vec3::z()),
        crossing(&truth, Vec3::new(-1.5, 2.0, 0.5), Vec3::new(1.0, 0.0, 1.0), Vec3::new(1.0, 0.0, -1.0)),
        crossing(&truth, Vec3::new(1.0, -1.5, 0.0), Vec3::new(1.0, -0.5, 0.0), Vec3::new(0.5, 1.0, 0.0)),
    ];
    let cfg = ApConfig {
        epsilon: 1e-9,
        gap_tolerance: 1e-4,
        record_trace: true,
        ..ApConfig::depth_camera()
    };
    let sol = solve_ap(SegmentPairSet::new(&pairs), &cfg)?;
    let (rot, tra) = sol.transform.error_to(&truth);
    println!(
        "{:?} after {} sweeps (last move {:.1e} m): error {:.1e} rad / {:.1e} m",
        sol.stop, sol.iterations, sol.final_displacement, rot, tra
    );
    for row in sol.trace.iter().filter(|r| r.sweep.is_power_of_two()) {
        println!("  sweep {:>5}: max displacement {:.2e} m", row.sweep, row.max_displacement);
    }
    if let Some(path) = trace_path {
        std::fs::write(&path, sol.trace_csv())?;
        println!("wrote {path}");
    }

    // Every line crosses the z-axis: rotation about and sliding along that
    // axis leave all intersections intact, so the pose is not determined.
    let pencil: Vec<_> = (0..7)
        .map(|i| {
            let angle = i as f64 * 0.45;
            let x = Vec3::new(0.0, 0.0, 0.3 * i as f64);
            let d1 = Vec3::new(angle.cos(), angle.sin(), 0.1);
            let d2 = Vec3::new(-angle.sin(), angle.cos(), -0.2);
            (segment(x + d1, d1, 2.5), segment(x + d2, d2, 2.5))
        })
        .collect();
    let sol = solve_ap(SegmentPairSet::new(&pencil), &ApConfig::depth_camera())?;
    println!(
        "pencil: degenerate = {}, conditioning {:.1e}, {} unsatisfied pairs",
        sol.degenerate, sol.diagnostic.conditioning, sol.diagnostic.unsatisfied_pairs
    );
    Ok(())
}
