//! Plücker lines, the generalized epipolar constraint, segment closest
//! points and least-squares rigid alignment on a hand-built example.
//!
//! cargo run --example geometry_basics

use linereg::geometry::{
    closest_points, epipolar_residual, fit_rigid_transform, plucker_from_segment, LineSegment3D, RigidTransform,
    Vec3,
};

fn main() -> linereg::Result<()> {
    // Frame 2 sees the world rotated 20° about z and shifted.
    let truth = RigidTransform::from_axis_angle(&Vec3::z(), 20f64.to_radians(), Vec3::new(0.4, -0.1, 0.05));

    // An edge on a wall in frame 1 and a crossing edge through the same
    // corner point, observed in frame 2.
    let corner = Vec3::new(2.0, 1.0, 0.5);
    let s1 = LineSegment3D::new(corner - Vec3::new(1.0, 0.0, 0.0), corner + Vec3::new(1.0, 0.0, 0.0))?;
    let c2 = truth.apply(&corner);
    let s2 = LineSegment3D::new(c2 - Vec3::new(0.0, 0.0, 1.0), c2 + Vec3::new(0.0, 0.0, 1.0))?;

    let (l, m) = (plucker_from_segment(&s1), plucker_from_segment(&s2));
    println!("line 1: direction {:?}, moment {:?}", l.direction.as_slice(), l.moment.as_slice());
    println!("klein quadric d·m = {:.1e}", l.direction.dot(&l.moment));
    println!("epipolar residual under the true pose: {:.1e}", epipolar_residual(&m, &l, &truth));
    println!(
        "epipolar residual under identity:      {:.3}",
        epipolar_residual(&m, &l, &RigidTransform::identity())
    );

    let cp = closest_points(&s1.transformed(&truth), &s2);
    println!("segments meet at {:?} (gap {:.1e} m)", cp.p1.as_slice(), cp.distance);

    // Procrustes: recover the pose from four corresponding points.
    let src = [Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::new(0.3, 0.2, 1.0)];
    let dst: Vec<Vec3> = src.iter().map(|p| truth.apply(p)).collect();
    let fit = fit_rigid_transform(&src, &dst)?;
    let (rot, tra) = fit.error_to(&truth);
    println!("procrustes error: {:.1e} rad, {:.1e} m", rot, tra);
    Ok(())
}
