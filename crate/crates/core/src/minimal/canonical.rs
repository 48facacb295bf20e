use crate::error::{Error, Result};
use crate::geometry::{Mat3, Plane, RigidTransform, Vec3};

/// `sin(1°)`: plane pairs closer to parallel cannot fix an intersection line.
pub const MIN_PLANE_PAIR_SIN: f64 = 0.017_452_406_437_283_512;

/// Pre-transforms taking each scan into its solver-specific canonical frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalFrames {
    pub pre1: RigidTransform,
    pub pre2: RigidTransform,
}

impl CanonicalFrames {
    /// Lifts a relative pose between the canonical frames back to the scans.
    pub fn uncanonicalize(&self, canonical: &RigidTransform) -> RigidTransform {
        self.pre2.inverse().compose(canonical).compose(&self.pre1)
    }
}

fn frame_from_axes(x: Vec3, y: Vec3, z: Vec3, origin: Vec3) -> RigidTransform {
    let r = Mat3::from_rows(&[x.transpose(), y.transpose(), z.transpose()]);
    RigidTransform::new(r, -(r * origin))
}

/// Maps `p2` onto `z = 0` (normal +z) and the line `p1 ∩ p2` onto the x-axis.
/// The x direction is chosen so that `p1`'s normal ends up with a
/// non-negative y component.
pub fn canonicalize_1l2p(p1: &Plane, p2: &Plane) -> Result<RigidTransform> {
    let axis = p1.normal.cross(&p2.normal);
    let sin = axis.norm();
    if sin < MIN_PLANE_PAIR_SIN {
        return Err(Error::Degenerate(format!(
            "planes are nearly parallel (sin = {sin:.3e})"
        )));
    }
    let z = p2.normal;
    let mut x = axis / sin;
    let mut y = z.cross(&x);
    if y.dot(&p1.normal) < 0.0 {
        x = -x;
        y = -y;
    }
    // Point of the intersection line closest to the origin: q = a n1 + b n2.
    let g = p1.normal.dot(&p2.normal);
    let det = 1.0 - g * g;
    let a = (-p1.offset + g * p2.offset) / det;
    let b = (-p2.offset + g * p1.offset) / det;
    let q = a * p1.normal + b * p2.normal;
    Ok(frame_from_axes(x, y, z, q))
}

/// Maps `p` onto `z = 0` with normal +z. The in-plane x-axis follows the
/// projection of the world x-axis (world y when the plane faces ±x) and the
/// plane point closest to the origin becomes the origin.
pub fn canonicalize_3l1p(p: &Plane) -> RigidTransform {
    let z = p.normal;
    let mut x = Vec3::x() - z * z.x;
    if x.norm() < 1e-6 {
        x = Vec3::y() - z * z.y;
    }
    let x = x.normalize();
    let y = z.cross(&x);
    frame_from_axes(x, y, z, p.closest_point_to_origin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::transform_plane;

    #[test]
    fn aligned_pair_is_identity() {
        let ground = Plane::new(Vec3::z(), 0.0).unwrap();
        let slanted = Plane::new(Vec3::new(0.0, 1.0, 1.0), 0.0).unwrap();
        let c = canonicalize_1l2p(&slanted, &ground).unwrap();
        assert!(c.max_abs_diff(&RigidTransform::identity()) < 1e-15);
    }

    #[test]
    fn parallel_planes_rejected() {
        let a = Plane::new(Vec3::z(), 0.0).unwrap();
        let b = Plane::new(Vec3::new(0.0, 0.001, 1.0), -1.0).unwrap();
        assert!(matches!(canonicalize_1l2p(&a, &b), Err(Error::Degenerate(_))));
    }

    #[test]
    fn offset_ground_is_pure_translation() {
        let p = Plane::new(Vec3::z(), -5.0).unwrap();
        let c = canonicalize_3l1p(&p);
        assert!(c.max_abs_diff(&RigidTransform::from_translation(Vec3::new(0.0, 0.0, -5.0))) < 1e-15);
        assert_eq!(canonicalize_3l1p(&Plane::new(Vec3::z(), 0.0).unwrap()), RigidTransform::identity());
    }

    #[test]
    fn x_facing_plane_uses_world_y() {
        let p = Plane::new(Vec3::x(), 2.0).unwrap();
        let c = canonicalize_3l1p(&p);
        let moved = transform_plane(&c, &p);
        assert!((moved.normal - Vec3::z()).norm() < 1e-15);
        assert!(moved.offset.abs() < 1e-15);
        assert!(c.is_proper_rotation(1e-12));
    }
}
