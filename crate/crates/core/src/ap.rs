//! Alternating projection between the line-intersection constraint and the
//! per-frame rigidity constraint.
//!
//! Each sweep moves every corresponding segment pair so the two segments touch
//! (half of the gap on each side), then snaps each frame's endpoints back to
//! the best rigid motion of their original positions. The relative pose is
//! read off the two rigid motions.

use std::fmt::Write as _;

use nalgebra::{Matrix6, SymmetricEigen, Vector6};

use crate::error::{Error, Result};
use crate::geometry::{closest_points, fit_rigid_transform, LineSegment3D, RigidTransform, Vec3};

/// Fewer pairs than this leave the 6-DOF pose under-constrained.
pub const MIN_PAIRS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApConfig {
    /// Stop once no endpoint moves more than this in a full sweep (m).
    pub epsilon: f64,
    pub max_iters: usize,
    /// Scales each intersection move; 1 is the plain projection, values in
    /// (1, 2] over-relax.
    pub relaxation: f64,
    /// A pair counts as satisfied when its segments are this close under the
    /// final pose (m).
    pub gap_tolerance: f64,
    /// Smallest accepted ratio of the weakest to the strongest direction of
    /// the constraint Jacobian.
    pub degeneracy_ratio: f64,
    /// Re-fit frame 1 against the intersection targets after the last sweep.
    pub final_polish: bool,
    pub record_trace: bool,
}

impl ApConfig {
    pub fn lidar() -> Self {
        Self {
            epsilon: 0.02,
            max_iters: 30_000,
            relaxation: 1.0,
            gap_tolerance: 0.02,
            degeneracy_ratio: 1e-4,
            final_polish: false,
            record_trace: false,
        }
    }

    pub fn depth_camera() -> Self {
        Self {
            epsilon: 0.005,
            gap_tolerance: 0.005,
            ..Self::lidar()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || self.max_iters == 0 {
            return Err(Error::InvalidInput("epsilon must be positive and max_iters at least 1".into()));
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 2.0) {
            return Err(Error::InvalidInput("relaxation must lie in (0, 2]".into()));
        }
        Ok(())
    }
}

impl Default for ApConfig {
    fn default() -> Self {
        Self::lidar()
    }
}

/// Corresponding segments of two frames: immutable originals plus the
/// working copies the projections move. Endpoints are `[a, b, c, d]` with
/// `(a, b)` in frame 1 and `(c, d)` in frame 2.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentPairSet {
    original: Vec<[Vec3; 4]>,
    working: Vec<[Vec3; 4]>,
}

impl SegmentPairSet {
    pub fn new(pairs: &[(LineSegment3D, LineSegment3D)]) -> Self {
        let original: Vec<[Vec3; 4]> = pairs
            .iter()
            .map(|(s1, s2)| [s1.a(), s1.b(), s2.a(), s2.b()])
            .collect();
        Self {
            working: original.clone(),
            original,
        }
    }

    pub fn len(&self) -> usize {
        self.original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }

    pub fn original_pair(&self, i: usize) -> (LineSegment3D, LineSegment3D) {
        to_segments(&self.original[i])
    }

    pub fn working_pair(&self, i: usize) -> (LineSegment3D, LineSegment3D) {
        to_segments(&self.working[i])
    }

    pub fn set_working_pair(&mut self, i: usize, pair: (LineSegment3D, LineSegment3D)) {
        self.working[i] = [pair.0.a(), pair.0.b(), pair.1.a(), pair.1.b()];
    }

    fn frame_points(endpoints: &[[Vec3; 4]], frame: usize) -> Vec<Vec3> {
        endpoints
            .iter()
            .flat_map(|e| [e[2 * frame], e[2 * frame + 1]])
            .collect()
    }
}

fn to_segments(e: &[Vec3; 4]) -> (LineSegment3D, LineSegment3D) {
    (
        LineSegment3D::from_endpoints_unchecked(e[0], e[1]),
        LineSegment3D::from_endpoints_unchecked(e[2], e[3]),
    )
}

/// Translates the two segments toward each other by half their gap each
/// (scaled by `relaxation`), so they touch at the former midpoint of their
/// closest points.
pub fn project_intersection(
    s1: &LineSegment3D,
    s2: &LineSegment3D,
    relaxation: f64,
) -> (LineSegment3D, LineSegment3D) {
    let cp = closest_points(s1, s2);
    let half = (cp.p2 - cp.p1) * (0.5 * relaxation);
    (s1.translated(&half), s2.translated(&-half))
}

/// Replaces each frame's working endpoints with the least-squares rigid
/// motion of its originals. Returns `(T1, T2)`.
pub fn project_rigidity(set: &mut SegmentPairSet) -> Result<(RigidTransform, RigidTransform)> {
    let mut transforms = [RigidTransform::identity(); 2];
    for (frame, slot) in transforms.iter_mut().enumerate() {
        let src = SegmentPairSet::frame_points(&set.original, frame);
        let dst = SegmentPairSet::frame_points(&set.working, frame);
        let t = fit_rigid_transform(&src, &dst)?;
        for (w, o) in set.working.iter_mut().zip(&set.original) {
            w[2 * frame] = t.apply(&o[2 * frame]);
            w[2 * frame + 1] = t.apply(&o[2 * frame + 1]);
        }
        *slot = t;
    }
    Ok((transforms[0], transforms[1]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// The largest endpoint displacement of a sweep fell below epsilon.
    Converged,
    MaxIterations,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegeneracyDiagnostic {
    /// Pairs whose segments stay farther apart than `gap_tolerance`.
    pub unsatisfied_pairs: usize,
    /// Weakest over strongest singular value of the constraint Jacobian.
    pub conditioning: f64,
    pub pencil_like: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub sweep: usize,
    pub max_displacement: f64,
    pub pose: RigidTransform,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApSolution {
    /// Maps frame-1 coordinates into frame 2: `T2⁻¹ ∘ T1`.
    pub transform: RigidTransform,
    /// True only when the sweep displacement fell below epsilon and no
    /// degeneracy was diagnosed.
    pub converged: bool,
    pub stop: StopReason,
    pub iterations: usize,
    pub final_displacement: f64,
    pub diagnostic: DegeneracyDiagnostic,
    pub degenerate: bool,
    pub trace: Vec<TraceRow>,
}

impl ApSolution {
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("sweep,max_displacement,tx,ty,tz,qx,qy,qz,qw\n");
        for row in &self.trace {
            let t = row.pose.translation;
            let q = row.pose.quaternion();
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                row.sweep, row.max_displacement, t.x, t.y, t.z, q.i, q.j, q.k, q.w
            );
        }
        s
    }
}

pub fn solve_ap(mut set: SegmentPairSet, cfg: &ApConfig) -> Result<ApSolution> {
    cfg.validate()?;
    let n = set.len();
    if n < MIN_PAIRS {
        return Err(Error::UnderConstrained(format!(
            "alternating projection needs at least {MIN_PAIRS} segment pairs, got {n}"
        )));
    }

    let src1 = SegmentPairSet::frame_points(&set.original, 0);
    let src2 = SegmentPairSet::frame_points(&set.original, 1);
    let mut dst1 = src1.clone();
    let mut dst2 = src2.clone();
    let mut t1 = RigidTransform::identity();
    let mut t2 = RigidTransform::identity();
    let mut trace = Vec::new();
    let mut stop = StopReason::MaxIterations;
    let mut iterations = 0;
    let mut displacement = f64::INFINITY;
    let mut previous = f64::INFINITY;

    for sweep in 1..=cfg.max_iters {
        iterations = sweep;
        let before = set.working.clone();

        for e in set.working.iter_mut() {
            let (s1, s2) = to_segments(e);
            let cp = closest_points(&s1, &s2);
            let half = (cp.p2 - cp.p1) * (0.5 * cfg.relaxation);
            e[0] += half;
            e[1] += half;
            e[2] -= half;
            e[3] -= half;
        }

        for (i, e) in set.working.iter().enumerate() {
            dst1[2 * i] = e[0];
            dst1[2 * i + 1] = e[1];
            dst2[2 * i] = e[2];
            dst2[2 * i + 1] = e[3];
        }
        t1 = fit_rigid_transform(&src1, &dst1)?;
        t2 = fit_rigid_transform(&src2, &dst2)?;
        for (w, o) in set.working.iter_mut().zip(&set.original) {
            w[0] = t1.apply(&o[0]);
            w[1] = t1.apply(&o[1]);
            w[2] = t2.apply(&o[2]);
            w[3] = t2.apply(&o[3]);
        }

        displacement = set
            .working
            .iter()
            .zip(&before)
            .flat_map(|(w, b)| (0..4).map(move |k| (w[k] - b[k]).norm()))
            .fold(0.0, f64::max);

        if cfg.record_trace {
            trace.push(TraceRow {
                sweep,
                max_displacement: displacement,
                pose: t2.inverse().compose(&t1),
            });
        }
        if sweep > 10 && displacement > previous * (1.0 + 1e-9) {
            log::trace!("sweep {sweep}: displacement grew {previous:e} -> {displacement:e}");
        }
        previous = displacement;

        if displacement < cfg.epsilon {
            stop = StopReason::Converged;
            break;
        }
    }

    let mut transform = t2.inverse().compose(&t1);
    if cfg.final_polish {
        if let Some(polished) = polish(&set, &transform, cfg.relaxation) {
            transform = polished;
        }
    }

    let diagnostic = diagnose(&set, &transform, cfg.gap_tolerance, cfg.degeneracy_ratio);
    let degenerate = diagnostic.unsatisfied_pairs > n.div_ceil(2) || diagnostic.pencil_like;
    if degenerate {
        log::debug!("degenerate alternating-projection instance: {diagnostic:?}");
    }

    Ok(ApSolution {
        transform,
        converged: stop == StopReason::Converged && !degenerate,
        stop,
        iterations,
        final_displacement: displacement,
        diagnostic,
        degenerate,
        trace,
    })
}

/// Moves each frame-1 segment fully onto its partner and re-fits frame 1
/// directly in frame-2 coordinates.
fn polish(set: &SegmentPairSet, t: &RigidTransform, relaxation: f64) -> Option<RigidTransform> {
    let mut src = Vec::with_capacity(2 * set.len());
    let mut dst = Vec::with_capacity(2 * set.len());
    for o in &set.original {
        let s1 = LineSegment3D::from_endpoints_unchecked(t.apply(&o[0]), t.apply(&o[1]));
        let s2 = LineSegment3D::from_endpoints_unchecked(o[2], o[3]);
        let cp = closest_points(&s1, &s2);
        let shift = (cp.p2 - cp.p1) * relaxation;
        src.extend([o[0], o[1]]);
        dst.extend([s1.a() + shift, s1.b() + shift]);
    }
    fit_rigid_transform(&src, &dst).ok()
}

/// Counts unsatisfied pairs and measures how well the pairs pin down all six
/// degrees of freedom at the final pose.
///
/// Each pair contributes the row `[n, p × n]` (twist in `(v, ω)` order), where
/// `n` is the common normal of the two lines and `p` the meeting point: the
/// first-order change of the gap under an infinitesimal motion.
fn diagnose(
    set: &SegmentPairSet,
    t: &RigidTransform,
    gap_tolerance: f64,
    min_ratio: f64,
) -> DegeneracyDiagnostic {
    let mut unsatisfied = 0;
    let mut rows = Vec::with_capacity(set.len());
    for o in &set.original {
        let s1 = LineSegment3D::from_endpoints_unchecked(t.apply(&o[0]), t.apply(&o[1]));
        let s2 = LineSegment3D::from_endpoints_unchecked(o[2], o[3]);
        let cp = closest_points(&s1, &s2);
        if cp.distance > gap_tolerance {
            unsatisfied += 1;
        }
        rows.push((s1.direction().cross(&s2.direction()), (cp.p1 + cp.p2) * 0.5));
    }
    let centroid = rows.iter().map(|r| r.1).sum::<Vec3>() / rows.len() as f64;
    let scale = (rows.iter().map(|r| (r.1 - centroid).norm_squared()).sum::<f64>() / rows.len() as f64)
        .sqrt()
        .max(1e-9);
    let mut normal_matrix = Matrix6::zeros();
    for (n, p) in &rows {
        let arm = (p - centroid) / scale;
        let m = arm.cross(n);
        let row = Vector6::new(n.x, n.y, n.z, m.x, m.y, m.z);
        normal_matrix += row * row.transpose();
    }
    let eig = SymmetricEigen::new(normal_matrix);
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min().max(0.0);
    let conditioning = if max > 0.0 { (min / max).sqrt() } else { 0.0 };
    DegeneracyDiagnostic {
        unsatisfied_pairs: unsatisfied,
        conditioning,
        pencil_like: conditioning < min_ratio,
    }
}
