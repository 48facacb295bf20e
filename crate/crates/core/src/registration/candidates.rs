use crate::features::{FittedLine, FittedPlane, FrameFeatures};
use crate::geometry::{segment_distance, LineSegment3D, Plane, PluckerLine, RigidTransform, Vec3};

/// A possible intersection between a frame-A line and a frame-B line.
#[derive(Clone, Debug, PartialEq)]
pub struct LineCandidate {
    /// Index into the frame-A line list (H-lines first, then V-lines).
    pub line_a: usize,
    /// Index into the frame-B line list (H-lines first, then V-lines).
    pub line_b: usize,
    pub segment_a: LineSegment3D,
    pub segment_b: LineSegment3D,
    pub plucker_a: PluckerLine,
    pub plucker_b: PluckerLine,
    /// Segment distance under the guess used to generate the candidate.
    pub distance: f64,
}

/// A possible correspondence between a frame-A plane and a frame-B plane.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCandidate {
    pub plane_a: usize,
    pub plane_b: usize,
    pub a: Plane,
    pub b: Plane,
    /// Angle between the normals under the guess (radians).
    pub angle: f64,
    /// Distance from A's transformed centroid to B's plane.
    pub distance: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConstraintSet {
    pub lines: Vec<LineCandidate>,
    pub planes: Vec<PlaneCandidate>,
}

impl ConstraintSet {
    /// Pairs A's H-lines with B's V-lines and, with `symmetric`, A's V-lines
    /// with B's H-lines; planes are paired by angle and centroid distance.
    pub fn build(
        a: &FrameFeatures,
        b: &FrameFeatures,
        t_guess: &RigidTransform,
        dist_max: f64,
        angle_max: f64,
        symmetric: bool,
    ) -> Self {
        let h_a = a.h_lines.len();
        let h_b = b.h_lines.len();
        let mut lines = Vec::new();
        let mut push = |la: &[FittedLine], lb: &[FittedLine], off_a: usize, off_b: usize| {
            for (i, j, distance) in candidate_line_pairs(la, lb, t_guess, dist_max) {
                lines.push(LineCandidate {
                    line_a: off_a + i,
                    line_b: off_b + j,
                    segment_a: la[i].segment,
                    segment_b: lb[j].segment,
                    plucker_a: la[i].plucker,
                    plucker_b: lb[j].plucker,
                    distance,
                });
            }
        };
        push(&a.h_lines, &b.v_lines, 0, h_b);
        if symmetric {
            push(&a.v_lines, &b.h_lines, h_a, 0);
        }
        let planes = candidate_plane_pairs(&a.planes, &b.planes, t_guess, angle_max, dist_max)
            .into_iter()
            .map(|(i, j, angle, distance)| PlaneCandidate {
                plane_a: i,
                plane_b: j,
                a: a.planes[i].plane,
                b: b.planes[j].plane,
                angle,
                distance,
            })
            .collect();
        Self { lines, planes }
    }
}

/// `(index in lines_a, index in lines_b, distance)` for every pair whose
/// segments are at most `dist_max` apart once `t_guess` moves frame A into
/// frame B. Pairing is many-to-many.
pub fn candidate_line_pairs(
    lines_a: &[FittedLine],
    lines_b: &[FittedLine],
    t_guess: &RigidTransform,
    dist_max: f64,
) -> Vec<(usize, usize, f64)> {
    let moved: Vec<(LineSegment3D, Vec3, f64)> = lines_a
        .iter()
        .map(|l| {
            let s = l.segment.transformed(t_guess);
            (s, s.midpoint(), 0.5 * s.length())
        })
        .collect();
    let spheres_b: Vec<(Vec3, f64)> = lines_b
        .iter()
        .map(|l| (l.segment.midpoint(), 0.5 * l.segment.length()))
        .collect();
    let mut out = Vec::new();
    for (i, (sa, ca, ra)) in moved.iter().enumerate() {
        for (j, (cb, rb)) in spheres_b.iter().enumerate() {
            if (ca - cb).norm() - ra - rb > dist_max {
                continue;
            }
            let d = segment_distance(sa, &lines_b[j].segment);
            if d <= dist_max {
                out.push((i, j, d));
            }
        }
    }
    out
}

/// `(index in planes_a, index in planes_b, normal angle, centroid distance)`
/// for pairs whose normals differ by less than `angle_max` (radians) and
/// whose A-centroid lies within `dist_max` of B's plane, both after `t_guess`.
pub fn candidate_plane_pairs(
    planes_a: &[FittedPlane],
    planes_b: &[FittedPlane],
    t_guess: &RigidTransform,
    angle_max: f64,
    dist_max: f64,
) -> Vec<(usize, usize, f64, f64)> {
    let mut out = Vec::new();
    for (i, pa) in planes_a.iter().enumerate() {
        let moved = pa.plane.transformed(t_guess);
        let centroid = t_guess.apply(&pa.centroid);
        for (j, pb) in planes_b.iter().enumerate() {
            let angle = moved.normal_angle(&pb.plane);
            let distance = pb.plane.signed_distance(&centroid).abs();
            if angle < angle_max && distance <= dist_max {
                out.push((i, j, angle, distance));
            }
        }
    }
    out
}
