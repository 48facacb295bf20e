use super::{RigidTransform, Vec3};
use crate::error::{Error, Result};

/// Oriented plane `normal · x + offset = 0` with a unit normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plane {
    pub normal: Vec3,
    pub offset: f64,
}

impl Plane {
    /// Normalizes `(normal, offset)` jointly so the normal is unit length.
    pub fn new(normal: Vec3, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if !n.is_finite() || n < 1e-12 {
            return Err(Error::InvalidInput("plane normal is zero".into()));
        }
        Ok(Self {
            normal: normal / n,
            offset: offset / n,
        })
    }

    pub fn from_point_normal(point: &Vec3, normal: &Vec3) -> Result<Self> {
        let p = Self::new(*normal, 0.0)?;
        Ok(Self {
            normal: p.normal,
            offset: -p.normal.dot(point),
        })
    }

    pub fn signed_distance(&self, p: &Vec3) -> f64 {
        self.normal.dot(p) + self.offset
    }

    /// Point of the plane closest to the origin.
    pub fn closest_point_to_origin(&self) -> Vec3 {
        -self.offset * self.normal
    }

    pub fn flipped(&self) -> Plane {
        Plane {
            normal: -self.normal,
            offset: -self.offset,
        }
    }

    pub fn transformed(&self, t: &RigidTransform) -> Plane {
        transform_plane(t, self)
    }

    /// Angle between the two normals, in radians. The atan2 form keeps full
    /// precision near 0 and π, where `acos` of the dot product does not.
    pub fn normal_angle(&self, other: &Plane) -> f64 {
        self.normal.cross(&other.normal).norm().atan2(self.normal.dot(&other.normal))
    }
}

pub fn transform_plane(t: &RigidTransform, p: &Plane) -> Plane {
    let normal = t.rotation * p.normal;
    Plane {
        normal,
        offset: p.offset - normal.dot(&t.translation),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_keeps_plane() {
        let p = Plane::new(Vec3::new(1.0, 2.0, 2.0), 3.0).unwrap();
        assert_eq!(transform_plane(&RigidTransform::identity(), &p), p);
    }

    #[test]
    fn lifting_ground_plane() {
        let p = Plane::new(Vec3::z(), 0.0).unwrap();
        let lifted = transform_plane(&RigidTransform::from_translation(Vec3::new(0.0, 0.0, 2.0)), &p);
        assert_eq!(lifted.normal, Vec3::z());
        assert_eq!(lifted.offset, -2.0);
        assert_eq!(lifted.signed_distance(&Vec3::new(5.0, -1.0, 2.0)), 0.0);
    }

    #[test]
    fn zero_normal_rejected() {
        assert!(Plane::new(Vec3::zeros(), 1.0).is_err());
    }
}
