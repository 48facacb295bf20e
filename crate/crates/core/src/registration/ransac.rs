use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use super::candidates::ConstraintSet;
use super::clusters::{cluster_normals, NormalClusters};
use crate::ap::{solve_ap, ApConfig, SegmentPairSet};
use crate::error::{Error, Result};
use crate::features::{derived_rng, FrameFeatures};
use crate::geometry::{segment_distance, LineSegment3D, RigidTransform};
use crate::minimal::{solve_1l2p, solve_3l1p};

/// Which solver turns a sample into pose hypotheses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverKind {
    /// Seven line intersections, solved by alternating projection.
    SevenLines,
    /// One line intersection and two plane correspondences.
    OneLineTwoPlanes,
    /// Three line intersections and one plane correspondence.
    ThreeLinesOnePlane,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [Self::SevenLines, Self::OneLineTwoPlanes, Self::ThreeLinesOnePlane];

    /// Line pairs drawn per cluster, extra line pairs from the whole pool,
    /// and plane pairs.
    fn sample_shape(self) -> ([usize; 3], usize, usize) {
        match self {
            Self::SevenLines => ([2, 2, 2], 1, 0),
            Self::OneLineTwoPlanes => ([0, 0, 0], 1, 2),
            Self::ThreeLinesOnePlane => ([1, 1, 1], 0, 1),
        }
    }

    pub fn default_hypotheses(self) -> usize {
        match self {
            Self::SevenLines => 500,
            Self::OneLineTwoPlanes | Self::ThreeLinesOnePlane => 5000,
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SevenLines => "7L",
            Self::OneLineTwoPlanes => "1L2P",
            Self::ThreeLinesOnePlane => "3L1P",
        })
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidInput(format!("unknown solver `{s}` (expected 7L, 1L2P or 3L1P)")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RansacConfig {
    pub solver: SolverKind,
    /// Maximum segment (and plane centroid) distance of a candidate (m).
    pub candidate_dist: f64,
    /// Maximum normal angle of a plane candidate (degrees).
    pub plane_angle_max: f64,
    /// Maximum segment distance of an inlier (m).
    pub inlier_dist: f64,
    /// Sampled hypotheses per round.
    pub hypotheses: usize,
    pub refinement_rounds: usize,
    pub seed: u64,
    /// Also pair frame A's V-lines with frame B's H-lines.
    pub symmetric_pass: bool,
    /// A pose needs at least this many inlier line pairs to be accepted.
    pub min_inliers: usize,
    /// After each round, re-solve alternating projection over all inliers
    /// of the best pose; the result is kept only if it scores at least as
    /// well.
    pub refit_inliers: bool,
    /// Alternating projection on a sampled hypothesis.
    pub ap: ApConfig,
    /// Alternating projection of the inlier refit.
    pub refit_ap: ApConfig,
}

impl RansacConfig {
    pub fn lidar(solver: SolverKind) -> Self {
        Self {
            solver,
            candidate_dist: 2.0,
            plane_angle_max: 20.0,
            inlier_dist: 0.02,
            hypotheses: solver.default_hypotheses(),
            refinement_rounds: 3,
            seed: 0,
            symmetric_pass: true,
            min_inliers: 7,
            refit_inliers: false,
            ap: Self::hypothesis_ap(ApConfig::lidar()),
            refit_ap: Self::refit_ap(ApConfig::lidar()),
        }
    }

    /// Depth cameras move far less between frames than a car between
    /// LiDAR sweeps, so candidates are gathered within 0.5 m.
    pub fn depth_camera(solver: SolverKind) -> Self {
        Self {
            candidate_dist: 0.5,
            inlier_dist: 0.005,
            ap: Self::hypothesis_ap(ApConfig::depth_camera()),
            refit_ap: Self::refit_ap(ApConfig::depth_camera()),
            ..Self::lidar(solver)
        }
    }

    /// A sample of correct pairs settles within a few hundred sweeps; one
    /// that has not is almost always built on a wrong pair, so hypotheses
    /// stop early and are screened by the degeneracy diagnostic.
    fn hypothesis_ap(base: ApConfig) -> ApConfig {
        ApConfig {
            epsilon: 1e-4,
            max_iters: 300,
            ..base
        }
    }

    fn refit_ap(base: ApConfig) -> ApConfig {
        ApConfig {
            epsilon: 1e-5,
            max_iters: 1000,
            ..base
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("candidate_dist", self.candidate_dist),
            ("plane_angle_max", self.plane_angle_max),
            ("inlier_dist", self.inlier_dist),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if self.hypotheses == 0 || self.refinement_rounds == 0 {
            return Err(Error::InvalidInput("hypotheses and refinement_rounds must be at least 1".into()));
        }
        self.ap.validate()?;
        self.refit_ap.validate()
    }
}

/// Candidate indices that one hypothesis is built from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HypothesisSample {
    pub lines: Vec<usize>,
    pub planes: Vec<usize>,
}

/// Line candidates grouped by the cluster of their frame-A line.
#[derive(Clone, Debug)]
pub struct SamplingPools {
    clusters: [Vec<usize>; 3],
    all_lines: usize,
    planes: usize,
    fallback: bool,
}

impl SamplingPools {
    pub fn new(cands: &ConstraintSet, clusters: &NormalClusters) -> Self {
        let mut pools: [Vec<usize>; 3] = Default::default();
        if !clusters.fallback {
            for (i, c) in cands.lines.iter().enumerate() {
                if let Some(k) = clusters.labels.get(c.line_a).copied().flatten() {
                    pools[k].push(i);
                }
            }
        }
        Self {
            clusters: pools,
            all_lines: cands.lines.len(),
            planes: cands.planes.len(),
            fallback: clusters.fallback,
        }
    }

    /// Draws one sample for `solver`, or `None` when the candidates cannot
    /// supply it.
    ///
    /// Each cluster contributes its quota; a cluster that runs short passes
    /// its deficit to the other clusters in order, and what they cannot
    /// cover is drawn from the whole pool together with the extra pairs.
    pub fn sample(&self, solver: SolverKind, rng: &mut impl Rng) -> Option<HypothesisSample> {
        let (quota, extra, planes) = solver.sample_shape();
        let needed = quota.iter().sum::<usize>() + extra;
        if self.all_lines < needed || self.planes < planes {
            return None;
        }
        let mut lines = Vec::with_capacity(needed);
        let mut deficit = 0;
        if self.fallback {
            deficit = quota.iter().sum();
        } else {
            for (pool, q) in self.clusters.iter().zip(quota) {
                let got = draw_distinct(pool, q, &mut lines, rng);
                deficit += q - got;
            }
            for pool in &self.clusters {
                if deficit == 0 {
                    break;
                }
                deficit -= draw_distinct(pool, deficit, &mut lines, rng);
            }
        }
        let rest = deficit + extra;
        if rest > 0 {
            let all: Vec<usize> = (0..self.all_lines).collect();
            if draw_distinct(&all, rest, &mut lines, rng) < rest {
                return None;
            }
        }
        let planes = rand::seq::index::sample(rng, self.planes, planes).into_vec();
        Some(HypothesisSample { lines, planes })
    }
}

/// Appends up to `k` members of `pool` not yet in `chosen`; returns how many.
fn draw_distinct(pool: &[usize], k: usize, chosen: &mut Vec<usize>, rng: &mut impl Rng) -> usize {
    if k == 0 {
        return 0;
    }
    let available = pool.iter().filter(|i| !chosen.contains(i)).count();
    if available <= k {
        let fresh: Vec<usize> = pool.iter().copied().filter(|i| !chosen.contains(i)).collect();
        chosen.extend(fresh);
        return available;
    }
    let mut drawn = 0;
    while drawn < k {
        let i = pool[rng.random_range(0..pool.len())];
        if !chosen.contains(&i) {
            chosen.push(i);
            drawn += 1;
        }
    }
    k
}

/// One sample for `solver`, see [`SamplingPools::sample`].
pub fn sample_hypothesis(
    cands: &ConstraintSet,
    clusters: &NormalClusters,
    solver: SolverKind,
    rng: &mut impl Rng,
) -> Option<HypothesisSample> {
    SamplingPools::new(cands, clusters).sample(solver, rng)
}

#[derive(Clone, Debug, PartialEq)]
pub struct InlierScore {
    /// Weighted inlier count.
    pub score: f64,
    /// Indices of the inlier line candidates, ascending.
    pub inliers: Vec<usize>,
    pub per_cluster: [usize; 3],
    pub unclustered: usize,
}

/// Weighted count of line candidates whose segments come within
/// `inlier_dist` once `t` moves frame A into frame B.
///
/// The score is assembled from per-cluster integer counts, so it does not
/// depend on candidate order.
pub fn count_inliers(
    t: &RigidTransform,
    cands: &ConstraintSet,
    inlier_dist: f64,
    clusters: &NormalClusters,
) -> InlierScore {
    let mut per_cluster = [0usize; 3];
    let mut unclustered = 0;
    let mut inliers = Vec::new();
    for (i, c) in cands.lines.iter().enumerate() {
        if !is_inlier(t, &c.segment_a, &c.segment_b, inlier_dist) {
            continue;
        }
        inliers.push(i);
        match clusters.labels.get(c.line_a).copied().flatten() {
            Some(k) => per_cluster[k] += 1,
            None => unclustered += 1,
        }
    }
    let score = (0..3)
        .map(|k| per_cluster[k] as f64 * clusters.weight(Some(k)))
        .sum::<f64>()
        + unclustered as f64;
    InlierScore {
        score,
        inliers,
        per_cluster,
        unclustered,
    }
}

fn is_inlier(t: &RigidTransform, a: &LineSegment3D, b: &LineSegment3D, inlier_dist: f64) -> bool {
    let moved = a.transformed(t);
    let reach = 0.5 * (moved.length() + b.length()) + inlier_dist;
    if (moved.midpoint() - b.midpoint()).norm_squared() > reach * reach {
        return false;
    }
    segment_distance(&moved, b) <= inlier_dist
}

/// One record per refinement round.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RoundDiagnostics {
    pub round: usize,
    pub line_candidates: usize,
    pub plane_candidates: usize,
    pub hypotheses_tried: usize,
    /// Hypotheses whose sample was drawn and solved.
    pub solved: usize,
    pub best_score: f64,
    pub inliers: usize,
    /// The inlier refit replaced the sampled pose.
    pub refit: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RegistrationDiagnostics {
    pub rounds: Vec<RoundDiagnostics>,
    /// Normal clustering fell back to uniform sampling.
    pub clustering_fallback: bool,
}

impl RegistrationDiagnostics {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.rounds {
            let _ = writeln!(
                s,
                "round={} line_candidates={} plane_candidates={} hypotheses={} solved={} best_score={} inliers={} refit={}",
                r.round, r.line_candidates, r.plane_candidates, r.hypotheses_tried, r.solved, r.best_score, r.inliers, r.refit
            );
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Registration {
    /// Maps frame-A coordinates into frame B.
    pub transform: RigidTransform,
    pub score: f64,
    /// Inlier line candidates of the final round.
    pub inliers: usize,
    /// Estimate the scoring candidate set was generated under:
    /// `ConstraintSet::build` with it and the same settings, followed by
    /// `count_inliers(transform, ..)`, reproduces `score` exactly.
    pub candidates_guess: RigidTransform,
    pub diagnostics: RegistrationDiagnostics,
}

/// Estimates the pose taking frame A into frame B.
///
/// Each round regenerates candidates under the current estimate (identity at
/// first), draws `hypotheses` samples and keeps the best-scoring pose. The
/// current estimate competes as hypothesis 0, so a round never returns a pose
/// that scores worse than its starting point on that round's candidates.
pub fn register_pair(a: &FrameFeatures, b: &FrameFeatures, cfg: &RansacConfig) -> Result<Registration> {
    cfg.validate()?;
    let normals: Vec<_> = a.h_lines.iter().chain(&a.v_lines).map(|l| l.normal).collect();
    let clusters = cluster_normals(&normals);
    let mut diagnostics = RegistrationDiagnostics {
        clustering_fallback: clusters.fallback,
        ..Default::default()
    };
    if clusters.fallback {
        log::debug!("normal clustering fell back to uniform sampling");
    }

    let mut guess = RigidTransform::identity();
    let mut best: Option<(RigidTransform, InlierScore, RigidTransform)> = None;
    for round in 1..=cfg.refinement_rounds {
        let cands = ConstraintSet::build(
            a,
            b,
            &guess,
            cfg.candidate_dist,
            cfg.plane_angle_max.to_radians(),
            cfg.symmetric_pass,
        );
        let pools = SamplingPools::new(&cands, &clusters);
        let carried = best.is_some().then_some(guess);
        let results: Vec<(usize, Option<(RigidTransform, f64)>)> = (0..=cfg.hypotheses)
            .into_par_iter()
            .map(|h| {
                let poses = if h == 0 {
                    match carried {
                        Some(g) => vec![g],
                        None => vec![RigidTransform::identity()],
                    }
                } else {
                    let mut rng = derived_rng(cfg.seed, ((round as u64) << 32) | h as u64);
                    match pools.sample(cfg.solver, &mut rng) {
                        Some(sample) => solve_sample(&cands, &sample, cfg, &guess),
                        None => return (0, None),
                    }
                };
                let solved = usize::from(h > 0);
                let best = poses
                    .into_iter()
                    .map(|p| {
                        let s = count_inliers(&p, &cands, cfg.inlier_dist, &clusters);
                        (p, s.score)
                    })
                    .reduce(|x, y| if y.1 > x.1 { y } else { x });
                (solved, best)
            })
            .collect();

        let solved = results.iter().map(|r| r.0).sum();
        let round_best = results
            .into_iter()
            .filter_map(|r| r.1)
            .reduce(|x, y| if y.1 > x.1 { y } else { x });
        let mut record = RoundDiagnostics {
            round,
            line_candidates: cands.lines.len(),
            plane_candidates: cands.planes.len(),
            hypotheses_tried: cfg.hypotheses,
            solved,
            ..Default::default()
        };
        if let Some((mut pose, _)) = round_best {
            let mut score = count_inliers(&pose, &cands, cfg.inlier_dist, &clusters);
            if cfg.refit_inliers {
                if let Some((refit, refit_score)) = refit_inliers(&pose, &score, &cands, cfg, &clusters) {
                    pose = refit;
                    score = refit_score;
                    record.refit = true;
                }
            }
            record.best_score = score.score;
            record.inliers = score.inliers.len();
            if score.inliers.len() >= cfg.min_inliers {
                if let Some((_, prev, _)) = &best {
                    if score.score < prev.score {
                        log::warn!("round {round}: score fell from {} to {}", prev.score, score.score);
                    }
                }
                best = Some((pose, score, guess));
                guess = pose;
            }
        }
        log::debug!("{:?}", record);
        diagnostics.rounds.push(record);
    }

    let Some((pose, score, candidates_guess)) = best else {
        return Err(Error::RegistrationFailed {
            reason: format!("no hypothesis reached {} inliers", cfg.min_inliers),
            diagnostics: Box::new(diagnostics),
        });
    };

    Ok(Registration {
        transform: pose,
        score: score.score,
        inliers: score.inliers.len(),
        candidates_guess,
        diagnostics,
    })
}

/// Alternating projection over every inlier of `pose`, started at `pose`.
/// Returns the refined pose when it scores at least as well.
fn refit_inliers(
    pose: &RigidTransform,
    score: &InlierScore,
    cands: &ConstraintSet,
    cfg: &RansacConfig,
    clusters: &NormalClusters,
) -> Option<(RigidTransform, InlierScore)> {
    if score.inliers.len() < crate::ap::MIN_PAIRS {
        return None;
    }
    let pairs: Vec<_> = score
        .inliers
        .iter()
        .map(|&i| (cands.lines[i].segment_a.transformed(pose), cands.lines[i].segment_b))
        .collect();
    let sol = solve_ap(SegmentPairSet::new(&pairs), &cfg.refit_ap).ok()?;
    if sol.degenerate {
        return None;
    }
    let refit = sol.transform.compose(pose);
    let refit_score = count_inliers(&refit, cands, cfg.inlier_dist, clusters);
    (refit_score.score >= score.score).then_some((refit, refit_score))
}

/// Pose hypotheses from one sample; empty when the solver rejects it.
fn solve_sample(
    cands: &ConstraintSet,
    sample: &HypothesisSample,
    cfg: &RansacConfig,
    guess: &RigidTransform,
) -> Vec<RigidTransform> {
    let line = |i: usize| &cands.lines[sample.lines[i]];
    let plane = |i: usize| &cands.planes[sample.planes[i]];
    match cfg.solver {
        SolverKind::SevenLines => {
            let pairs: Vec<_> = sample
                .lines
                .iter()
                .map(|&i| (cands.lines[i].segment_a.transformed(guess), cands.lines[i].segment_b))
                .collect();
            match solve_ap(SegmentPairSet::new(&pairs), &cfg.ap) {
                Ok(sol) if !sol.degenerate => vec![sol.transform.compose(guess)],
                _ => Vec::new(),
            }
        }
        SolverKind::OneLineTwoPlanes => {
            let (p, q) = (plane(0), plane(1));
            solve_1l2p(&line(0).plucker_a, &line(0).plucker_b, (&p.a, &q.a), (&p.b, &q.b))
                .map(|t| vec![t])
                .unwrap_or_default()
        }
        SolverKind::ThreeLinesOnePlane => {
            let pairs = [0, 1, 2].map(|i| (line(i).plucker_a, line(i).plucker_b));
            solve_3l1p(&pairs, &plane(0).a, &plane(0).b)
                .map(|c| c.poses)
                .unwrap_or_default()
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::eval::{box_room, raycast_scene};
    use crate::features::FeatureParams;
    use crate::geometry::Vec3;
    use crate::scan::downsample;

    fn frame(pose: &RigidTransform) -> FrameFeatures {
        let spec = box_room();
        let scan = raycast_scene(&spec.scene, &spec.start.compose(pose));
        FrameFeatures::extract(&downsample(&scan.cloud, 10, 10), &FeatureParams::depth_camera())
    }

    fn quick_config() -> RansacConfig {
        let mut cfg = RansacConfig::depth_camera(SolverKind::SevenLines);
        cfg.hypotheses = 60;
        cfg.seed = 5;
        cfg
    }

    #[test]
    fn identical_frames_register_to_identity() {
        let f = frame(&RigidTransform::identity());
        let reg = register_pair(&f, &f, &quick_config()).unwrap();
        let (rot, tra) = reg.transform.error_to(&RigidTransform::identity());
        // Near-miss pairs of distinct lines may favour a pose a fraction of
        // the inlier distance away from identity.
        assert!(rot < 1e-3 && tra < 1e-3, "{rot} {tra}");
        assert_eq!(reg.inliers, reg.diagnostics.rounds.last().unwrap().inliers);
    }

    #[test]
    fn recovers_small_motion_and_reproduces_score() {
        let motion = RigidTransform::from_axis_angle(&Vec3::new(0.2, 1.0, 0.1), 2f64.to_radians(), Vec3::new(0.1, 0.05, 0.25));
        let (fa, fb) = (frame(&RigidTransform::identity()), frame(&motion));
        let cfg = quick_config();
        let reg = register_pair(&fb, &fa, &cfg).unwrap();
        let (rot, tra) = reg.transform.error_to(&motion);
        assert!(rot.to_degrees() < 0.1 && tra < 0.005, "{} deg {} m", rot.to_degrees(), tra);

        let normals: Vec<_> = fb.h_lines.iter().chain(&fb.v_lines).map(|l| l.normal).collect();
        let clusters = cluster_normals(&normals);
        let cands = ConstraintSet::build(
            &fb,
            &fa,
            &reg.candidates_guess,
            cfg.candidate_dist,
            cfg.plane_angle_max.to_radians(),
            cfg.symmetric_pass,
        );
        let again = count_inliers(&reg.transform, &cands, cfg.inlier_dist, &clusters);
        assert_eq!(again.score, reg.score);
        assert_eq!(again.inliers.len(), reg.inliers);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let motion = RigidTransform::from_axis_angle(&Vec3::z(), 0.03, Vec3::new(0.2, 0.0, 0.1));
        let (fa, fb) = (frame(&RigidTransform::identity()), frame(&motion));
        let cfg = quick_config();
        let r1 = register_pair(&fb, &fa, &cfg).unwrap();
        let r2 = register_pair(&fb, &fa, &cfg).unwrap();
        assert_eq!(r1.transform, r2.transform);
        assert_eq!(r1.diagnostics, r2.diagnostics);
    }

    #[test]
    fn disjoint_frames_fail_with_diagnostics() {
        let f = frame(&RigidTransform::identity());
        let far = RigidTransform::from_translation(Vec3::new(100.0, 0.0, 0.0));
        let moved = FrameFeatures {
            h_lines: f.h_lines.iter().map(|l| moved_line(l, &far)).collect(),
            v_lines: f.v_lines.iter().map(|l| moved_line(l, &far)).collect(),
            planes: Vec::new(),
        };
        match register_pair(&f, &moved, &quick_config()) {
            Err(Error::RegistrationFailed { diagnostics, .. }) => {
                assert_eq!(diagnostics.rounds.len(), 3);
                assert!(diagnostics.rounds.iter().all(|r| r.line_candidates == 0));
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    fn moved_line(l: &crate::features::FittedLine, t: &RigidTransform) -> crate::features::FittedLine {
        let mut l = l.clone();
        l.segment = l.segment.transformed(t);
        l.plucker = l.plucker.transformed(t);
        l
    }

    #[test]
    fn score_ignores_candidate_order() {
        let motion = RigidTransform::from_axis_angle(&Vec3::y(), 0.02, Vec3::new(0.0, 0.0, 0.2));
        let (fa, fb) = (frame(&RigidTransform::identity()), frame(&motion));
        let normals: Vec<_> = fb.h_lines.iter().chain(&fb.v_lines).map(|l| l.normal).collect();
        let clusters = cluster_normals(&normals);
        let mut cands = ConstraintSet::build(&fb, &fa, &RigidTransform::identity(), 0.5, 0.35, true);
        let before = count_inliers(&motion, &cands, 0.01, &clusters);
        assert!(before.inliers.len() > 20);
        cands.lines.reverse();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        rand::seq::SliceRandom::shuffle(cands.lines.as_mut_slice(), &mut rng);
        let after = count_inliers(&motion, &cands, 0.01, &clusters);
        assert_eq!(before.score, after.score);
        assert_eq!(before.per_cluster, after.per_cluster);
    }

    #[test]
    fn samples_follow_cluster_quota() {
        let motion = RigidTransform::from_axis_angle(&Vec3::y(), 0.02, Vec3::new(0.0, 0.0, 0.2));
        let (fa, fb) = (frame(&RigidTransform::identity()), frame(&motion));
        let normals: Vec<_> = fb.h_lines.iter().chain(&fb.v_lines).map(|l| l.normal).collect();
        let clusters = cluster_normals(&normals);
        assert!(!clusters.fallback);
        let cands = ConstraintSet::build(&fb, &fa, &RigidTransform::identity(), 0.5, 0.35, true);
        let pools = SamplingPools::new(&cands, &clusters);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let s = pools.sample(SolverKind::SevenLines, &mut rng).unwrap();
            assert_eq!(s.lines.len(), 7);
            let mut sorted = s.lines.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), 7);
            let mut counts = [0; 3];
            for &i in &s.lines[..6] {
                counts[clusters.labels[cands.lines[i].line_a].unwrap()] += 1;
            }
            assert_eq!(counts, [2, 2, 2]);
        }
    }

    #[test]
    fn short_cluster_passes_its_quota_on() {
        let motion = RigidTransform::from_axis_angle(&Vec3::y(), 0.02, Vec3::new(0.0, 0.0, 0.2));
        let (fa, fb) = (frame(&RigidTransform::identity()), frame(&motion));
        let normals: Vec<_> = fb.h_lines.iter().chain(&fb.v_lines).map(|l| l.normal).collect();
        let clusters = cluster_normals(&normals);
        let mut cands = ConstraintSet::build(&fb, &fa, &RigidTransform::identity(), 0.5, 0.35, true);
        // Keep a single candidate from cluster 0.
        let mut kept_zero = false;
        cands.lines.retain(|c| {
            if clusters.labels[c.line_a] != Some(0) {
                return true;
            }
            !std::mem::replace(&mut kept_zero, true)
        });
        let pools = SamplingPools::new(&cands, &clusters);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let s = pools.sample(SolverKind::SevenLines, &mut rng).unwrap();
            let zero = s.lines.iter().filter(|&&i| clusters.labels[cands.lines[i].line_a] == Some(0)).count();
            assert_eq!(zero, 1);
            assert_eq!(s.lines.len(), 7);
        }
    }

    #[test]
    fn plane_solver_needs_plane_pairs() {
        let f = frame(&RigidTransform::identity());
        let clusters = cluster_normals(&[]);
        let mut cands = ConstraintSet::build(&f, &f, &RigidTransform::identity(), 0.5, 0.35, true);
        cands.planes.truncate(1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_hypothesis(&cands, &clusters, SolverKind::OneLineTwoPlanes, &mut rng).is_none());
        let s = sample_hypothesis(&cands, &clusters, SolverKind::ThreeLinesOnePlane, &mut rng).unwrap();
        assert_eq!((s.lines.len(), s.planes.len()), (3, 1));
    }

    #[test]
    fn solver_names_round_trip() {
        for s in SolverKind::ALL {
            assert_eq!(s.to_string().parse::<SolverKind>().unwrap(), s);
        }
        assert!("8L".parse::<SolverKind>().is_err());
    }
}
