use super::FittedLine;
use crate::geometry::{closest_points, Vec3};

/// `sin(10°)`: H/V pairs closer to parallel than this give no normal.
pub const MIN_NORMAL_PAIR_SIN: f64 = 0.173_648_177_666_930_35;

/// Flips `n` into the hemisphere of +z; normals perpendicular to z are
/// decided by +y, then +x.
pub fn canonicalize_normal(n: Vec3) -> Vec3 {
    const TIE: f64 = 1e-9;
    for k in [2usize, 1, 0] {
        if n[k] > TIE {
            return n;
        }
        if n[k] < -TIE {
            return -n;
        }
    }
    n
}

/// Assigns each line the normal `dir_H × dir_V` from its nearest crossing
/// partner of the other family (same frame). Lines without a partner within
/// `pair_dist` keep `normal = None`.
pub fn estimate_line_normals(h_lines: &mut [FittedLine], v_lines: &mut [FittedLine], pair_dist: f64) {
    let mut best_h: Vec<Option<(f64, Vec3)>> = vec![None; h_lines.len()];
    let mut best_v: Vec<Option<(f64, Vec3)>> = vec![None; v_lines.len()];

    for (i, h) in h_lines.iter().enumerate() {
        let hm = h.segment.midpoint();
        let hr = 0.5 * h.segment.length();
        let hd = h.segment.direction();
        for (j, v) in v_lines.iter().enumerate() {
            let reach = hr + 0.5 * v.segment.length() + pair_dist;
            if (v.segment.midpoint() - hm).norm_squared() > reach * reach {
                continue;
            }
            let cross = hd.cross(&v.segment.direction());
            let s = cross.norm();
            if s < MIN_NORMAL_PAIR_SIN {
                continue;
            }
            let d = closest_points(&h.segment, &v.segment).distance;
            if d > pair_dist {
                continue;
            }
            let n = canonicalize_normal(cross / s);
            if best_h[i].is_none_or(|(bd, _)| d < bd) {
                best_h[i] = Some((d, n));
            }
            if best_v[j].is_none_or(|(bd, _)| d < bd) {
                best_v[j] = Some((d, n));
            }
        }
    }
    for (l, b) in h_lines.iter_mut().zip(best_h) {
        l.normal = b.map(|(_, n)| n);
    }
    for (l, b) in v_lines.iter_mut().zip(best_v) {
        l.normal = b.map(|(_, n)| n);
    }
}
