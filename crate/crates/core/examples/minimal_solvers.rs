//! Closed-form poses from one line intersection plus two planes (1L2P) and
//! from three line intersections plus one plane (3L1P), on instances built
//! forward from a known pose.
//!
//! cargo run --release --example minimal_solvers

use std::time::Instant;

use linereg::geometry::{Plane, PluckerLine, RigidTransform, Vec3};
use linereg::minimal::{solve_1l2p, solve_3l1p};

fn line(p: Vec3, d: Vec3) -> PluckerLine {
    PluckerLine::from_point_direction(&p, &d).expect("nonzero direction")
}

fn main() -> linereg::Result<()> {
    let truth = RigidTransform::from_axis_angle(
        &Vec3::new(0.2, -0.3, 1.0).normalize(),
        35f64.to_radians(),
        Vec3::new(0.8, 0.3, -0.2),
    );

    // A floor and a wall seen from both frames, and one crossing pair of edges.
    let floor = Plane::new(Vec3::z(), 1.2)?;
    let wall = Plane::new(Vec3::new(1.0, 0.2, 0.0), -3.0)?;
    let x = Vec3::new(1.0, 2.0, 0.3);
    let l = line(x, Vec3::new(0.0, 1.0, 0.2));
    let m = line(truth.apply(&x), Vec3::new(0.5, 0.1, 1.0));

    let start = Instant::now();
    let pose = solve_1l2p(
        &l,
        &m,
        (&wall, &floor),
        (&wall.transformed(&truth), &floor.transformed(&truth)),
    )?;
    let elapsed = start.elapsed();
    let (rot, tra) = pose.error_to(&truth);
    println!("1L2P: error {rot:.1e} rad / {tra:.1e} m in {elapsed:?}");

    // Three crossing pairs and the floor.
    let pairs = [
        (Vec3::new(1.0, 0.0, 0.5), Vec3::x(), Vec3::y()),
        (Vec3::new(-0.5, 2.0, 1.5), Vec3::y(), Vec3::z()),
        (Vec3::new(2.0, 1.0, -0.5), Vec3::z(), Vec3::x()),
    ]
    .map(|(p, d1, d2)| (line(p, d1), line(truth.apply(&p), d2)));
    let start = Instant::now();
    let candidates = solve_3l1p(&pairs, &floor, &floor.transformed(&truth))?;
    let elapsed = start.elapsed();
    println!("3L1P: {} candidate poses in {elapsed:?}", candidates.poses.len());
    for (i, pose) in candidates.poses.iter().enumerate() {
        let (rot, tra) = pose.error_to(&truth);
        println!("  candidate {i}: error {rot:.1e} rad / {tra:.1e} m");
    }
    // The remaining candidates satisfy the same four constraints; picking
    // among them needs more correspondences, which is what RANSAC scoring does.
    Ok(())
}
