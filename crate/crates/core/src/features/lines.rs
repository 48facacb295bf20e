use rand::Rng;
use rayon::prelude::*;

use super::{derived_rng, principal_axes, FittedLine, Orientation, ScanLine};
use crate::geometry::{LineSegment3D, Vec3};
use crate::scan::OrganizedCloud;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFitParams {
    /// Maximum point-to-line distance of an inlier (m).
    pub inlier_dist: f64,
    /// Scan-lines with fewer present points are skipped.
    pub min_points: usize,
    pub min_inliers: usize,
    /// More than this many consecutive skipped cells end a segment.
    pub gap_cells: usize,
    pub max_iterations: usize,
    pub confidence: f64,
    pub seed: u64,
}

impl LineFitParams {
    pub fn lidar() -> Self {
        Self {
            inlier_dist: 0.05,
            min_points: 5,
            min_inliers: 5,
            gap_cells: 2,
            max_iterations: 200,
            confidence: 0.99,
            seed: 0,
        }
    }

    pub fn depth_camera() -> Self {
        Self {
            inlier_dist: 0.01,
            ..Self::lidar()
        }
    }
}

pub fn scan_lines(cloud: &OrganizedCloud, orientation: Orientation) -> Vec<ScanLine> {
    match orientation {
        Orientation::Horizontal => (0..cloud.rows())
            .map(|r| ScanLine {
                orientation,
                index: r,
                points: (0..cloud.cols())
                    .filter_map(|c| cloud.get(r, c).map(|p| (c, p)))
                    .collect(),
            })
            .collect(),
        Orientation::Vertical => (0..cloud.cols())
            .map(|c| ScanLine {
                orientation,
                index: c,
                points: (0..cloud.rows())
                    .filter_map(|r| cloud.get(r, c).map(|p| (r, p)))
                    .collect(),
            })
            .collect(),
    }
}

/// Fits every scan-line of one family; output ordered by scan-line index.
pub fn fit_scanlines(
    cloud: &OrganizedCloud,
    orientation: Orientation,
    params: &LineFitParams,
) -> Vec<FittedLine> {
    let lines = scan_lines(cloud, orientation);
    let per_line: Vec<Vec<FittedLine>> = lines
        .par_iter()
        .map(|l| fit_scanline_segments(l, params))
        .collect();
    per_line.into_iter().flatten().collect()
}

/// Sequential RANSAC over one scan-line.
///
/// The scan-line is first cut at gaps. Within a run, the hypothesis whose
/// inliers form the largest gap-free group wins; that group is refined by
/// orthogonal least squares and claimed, and the points before and after it
/// are processed the same way.
pub fn fit_scanline_segments(line: &ScanLine, params: &LineFitParams) -> Vec<FittedLine> {
    if line.points.len() < params.min_points.max(2) {
        return Vec::new();
    }
    let stream = ((line.orientation == Orientation::Vertical) as u64) << 40 | line.index as u64;
    let mut rng = derived_rng(params.seed, stream);

    let mut out = Vec::new();
    let mut stack: Vec<&[(usize, Vec3)]> = split_at_gaps(&line.points, params.gap_cells);
    stack.reverse();
    while let Some(run) = stack.pop() {
        if run.len() < params.min_inliers.max(2) {
            continue;
        }
        let Some((first, last)) = best_group(run, params, &mut rng) else {
            continue;
        };
        if let Some(fitted) = refine(line, &run[first..=last], params) {
            out.push(fitted);
        }
        // Right part is pushed first so the left part is processed next.
        if last + 1 < run.len() {
            stack.push(&run[last + 1..]);
        }
        if first > 0 {
            stack.push(&run[..first]);
        }
    }
    out.sort_by_key(|l| l.inlier_positions[0]);
    out
}

fn split_at_gaps(points: &[(usize, Vec3)], gap_cells: usize) -> Vec<&[(usize, Vec3)]> {
    let mut runs = Vec::new();
    let mut start = 0;
    for i in 1..points.len() {
        if points[i].0 - points[i - 1].0 > gap_cells + 1 {
            runs.push(&points[start..i]);
            start = i;
        }
    }
    if start < points.len() {
        runs.push(&points[start..]);
    }
    runs
}

fn point_line_distance(p: &Vec3, origin: &Vec3, dir: &Vec3) -> f64 {
    (p - origin).cross(dir).norm()
}

/// Largest group of inliers whose positions are never more than
/// `gap_cells + 1` apart. Returns run indices of its first and last inlier
/// and its size.
fn inlier_group(
    run: &[(usize, Vec3)],
    origin: &Vec3,
    dir: &Vec3,
    params: &LineFitParams,
) -> (usize, usize, usize) {
    let mut best = (0, 0, 0);
    let mut cur: Option<(usize, usize, usize)> = None;
    for (i, (pos, p)) in run.iter().enumerate() {
        if point_line_distance(p, origin, dir) > params.inlier_dist {
            continue;
        }
        cur = match cur {
            Some((f, l, n)) if pos - run[l].0 <= params.gap_cells + 1 => Some((f, i, n + 1)),
            _ => Some((i, i, 1)),
        };
        if let Some(c) = cur {
            if c.2 > best.2 {
                best = c;
            }
        }
    }
    best
}

fn best_group(
    run: &[(usize, Vec3)],
    params: &LineFitParams,
    rng: &mut impl Rng,
) -> Option<(usize, usize)> {
    let n = run.len();
    let mut best = (0, 0, 0);
    let consider = |i: usize, j: usize, best: &mut (usize, usize, usize)| {
        let d = run[j].1 - run[i].1;
        let len = d.norm();
        if len < 1e-12 {
            return;
        }
        let g = inlier_group(run, &run[i].1, &(d / len), params);
        if g.2 > best.2 {
            *best = g;
        }
    };

    let pairs = n * (n - 1) / 2;
    if pairs <= params.max_iterations {
        for i in 0..n {
            for j in i + 1..n {
                consider(i, j, &mut best);
            }
        }
    } else {
        let mut needed = params.max_iterations;
        let mut k = 0;
        while k < needed {
            k += 1;
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n - 1);
            let j = if j >= i { j + 1 } else { j };
            consider(i.min(j), i.max(j), &mut best);
            let w = best.2 as f64 / n as f64;
            if w > 0.0 {
                let fail = 1.0 - w * w;
                let est = if fail <= 0.0 {
                    1.0
                } else {
                    (1.0 - params.confidence).ln() / fail.ln()
                };
                needed = needed.min(est.ceil().max(1.0) as usize);
            }
        }
    }
    (best.2 >= params.min_inliers).then_some((best.0, best.1))
}

/// Orthogonal least-squares line through the group, keeping the points still
/// within `inlier_dist` of the refined line.
fn refine(line: &ScanLine, group: &[(usize, Vec3)], params: &LineFitParams) -> Option<FittedLine> {
    let mut members: Vec<(usize, Vec3)> = group.to_vec();
    let mut fit = None;
    for _ in 0..3 {
        if members.len() < params.min_inliers.max(2) {
            return None;
        }
        let pts: Vec<Vec3> = members.iter().map(|m| m.1).collect();
        let (centroid, _, axes) = principal_axes(&pts);
        let dir = axes[2];
        let kept: Vec<(usize, Vec3)> = group
            .iter()
            .filter(|(_, p)| point_line_distance(p, &centroid, &dir) <= params.inlier_dist)
            .copied()
            .collect();
        let stable = kept.len() == members.len();
        fit = Some((centroid, dir));
        members = kept;
        if stable {
            break;
        }
    }
    let (centroid, dir) = fit?;
    // The last refit may not have been re-checked; enforce the invariant.
    members.retain(|(_, p)| point_line_distance(p, &centroid, &dir) <= params.inlier_dist);
    if members.len() < params.min_inliers.max(2) {
        return None;
    }
    let (lo, hi) = members.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, p)| {
        let s = (p - centroid).dot(&dir);
        (lo.min(s), hi.max(s))
    });
    let segment = LineSegment3D::new(centroid + dir * lo, centroid + dir * hi).ok()?;
    Some(FittedLine {
        plucker: segment.plucker(),
        segment,
        orientation: line.orientation,
        normal: None,
        inlier_count: members.len(),
        source_scanline: (line.orientation, line.index),
        inlier_positions: members.iter().map(|m| m.0).collect(),
    })
}
