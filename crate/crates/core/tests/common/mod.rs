//! Forward generators shared by the integration tests: every instance is
//! built from a known ground-truth pose.
#![allow(dead_code)]

use linereg::geometry::{LineSegment3D, Plane, PluckerLine, RigidTransform, Vec3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn unit_vector(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn point_in_box(rng: &mut impl Rng, half: f64) -> Vec3 {
    Vec3::new(rng.random_range(-half..half), rng.random_range(-half..half), rng.random_range(-half..half))
}

/// Unit vector orthogonal to `n`.
pub fn perpendicular(rng: &mut impl Rng, n: &Vec3) -> Vec3 {
    loop {
        let v = unit_vector(rng);
        let p = v - n * n.dot(&v);
        if p.norm() > 0.3 {
            return p.normalize();
        }
    }
}

/// Rotation angle up to `max_angle`, translation norm up to `max_shift`.
pub fn random_transform(rng: &mut impl Rng, max_angle: f64, max_shift: f64) -> RigidTransform {
    let axis = unit_vector(rng);
    let angle = rng.random_range(0.0..max_angle);
    let t = unit_vector(rng) * rng.random_range(0.0..max_shift);
    RigidTransform::from_axis_angle(&axis, angle, t)
}

/// Arbitrary pose: any rotation, translation within a few meters.
pub fn any_transform(rng: &mut impl Rng) -> RigidTransform {
    random_transform(rng, std::f64::consts::PI, 5.0)
}

/// A line through `x` in scan 1 and a line through `truth(x)` in scan 2,
/// so the pair intersects under `truth`.
pub fn intersecting_pair(rng: &mut impl Rng, truth: &RigidTransform, x: &Vec3) -> (PluckerLine, PluckerLine) {
    let l = PluckerLine::from_point_direction(x, &unit_vector(rng)).unwrap();
    let m = PluckerLine::from_point_direction(&truth.apply(x), &unit_vector(rng)).unwrap();
    (l, m)
}

/// A plane in scan 1 and its image in scan 2.
pub fn plane_pair(rng: &mut impl Rng, truth: &RigidTransform, normal: Vec3) -> (Plane, Plane) {
    let p = Plane::new(normal, rng.random_range(-3.0..3.0)).unwrap();
    let q = p.transformed(truth);
    (p, q)
}

pub struct OneLineTwoPlanes {
    pub truth: RigidTransform,
    pub l: PluckerLine,
    pub m: PluckerLine,
    pub planes1: (Plane, Plane),
    pub planes2: (Plane, Plane),
}

pub fn one_line_two_planes(rng: &mut impl Rng) -> OneLineTwoPlanes {
    let truth = any_transform(rng);
    let n1 = unit_vector(rng);
    let n2 = loop {
        let n = unit_vector(rng);
        if n.cross(&n1).norm() > 0.3 {
            break n;
        }
    };
    let (a1, a2) = plane_pair(rng, &truth, n1);
    let (b1, b2) = plane_pair(rng, &truth, n2);
    let (l, m) = loop {
        let x = point_in_box(rng, 3.0);
        let pair = intersecting_pair(rng, &truth, &x);
        // The pair must not be parallel to the plane intersection line,
        // otherwise it does not fix the remaining translation.
        let axis = n1.cross(&n2).normalize();
        let m_dir = truth.inverse().apply_vector(&pair.1.direction);
        if pair.0.direction.cross(&m_dir).dot(&axis).abs() > 0.2 {
            break pair;
        }
    };
    OneLineTwoPlanes {
        truth,
        l,
        m,
        planes1: (a1, b1),
        planes2: (a2, b2),
    }
}

pub struct ThreeLinesOnePlane {
    pub truth: RigidTransform,
    pub pairs: [(PluckerLine, PluckerLine); 3],
    pub p1: Plane,
    pub p1_prime: Plane,
}

pub fn three_lines_one_plane(rng: &mut impl Rng) -> ThreeLinesOnePlane {
    let truth = any_transform(rng);
    let normal = unit_vector(rng);
    let (p1, p1_prime) = plane_pair(rng, &truth, normal);
    let pairs = [0, 1, 2].map(|_| {
        let x = point_in_box(rng, 3.0);
        intersecting_pair(rng, &truth, &x)
    });
    ThreeLinesOnePlane {
        truth,
        pairs,
        p1,
        p1_prime,
    }
}

/// Segment of length `len` along `dir` containing `x` at a random interior
/// position.
pub fn segment_through(rng: &mut impl Rng, x: &Vec3, dir: &Vec3, len: f64) -> LineSegment3D {
    let s = rng.random_range(0.25..0.75) * len;
    LineSegment3D::new(x - dir * s, x + dir * (len - s)).unwrap()
}

/// `n` segment pairs intersecting under `truth` (frame 1 → frame 2). The
/// common normals of the pairs cycle through three spread directions, as
/// for lines fitted on the three main surfaces of a room.
pub fn intersecting_segments(rng: &mut impl Rng, truth: &RigidTransform, n: usize) -> Vec<(LineSegment3D, LineSegment3D)> {
    let axis = unit_vector(rng);
    let base = RigidTransform::from_axis_angle(&axis, rng.random_range(0.0..3.0), Vec3::zeros());
    let normals = [Vec3::x(), Vec3::y(), Vec3::z()].map(|a| base.apply_vector(&a));
    (0..n)
        .map(|i| {
            let normal = normals[i % 3];
            let x = point_in_box(rng, 2.0);
            let d1 = perpendicular(rng, &normal);
            let d2 = loop {
                let d = perpendicular(rng, &normal);
                if d.cross(&d1).norm() > 0.5 {
                    break d;
                }
            };
            let (len1, len2) = (rng.random_range(1.5..3.0), rng.random_range(1.5..3.0));
            let s1 = segment_through(rng, &x, &d1, len1);
            let s2 = segment_through(rng, &truth.apply(&x), &truth.apply_vector(&d2), len2);
            (s1, s2)
        })
        .collect()
}
