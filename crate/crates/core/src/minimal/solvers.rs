use super::canonical::{canonicalize_1l2p, canonicalize_3l1p, CanonicalFrames};
use super::quartic::{solve_quartic, Quartic};
use crate::error::{Error, Result};
use crate::geometry::{transform_line, Mat3, Plane, PluckerLine, RigidTransform, Vec3};

/// At most four poses from one 3L1P instance.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PoseCandidateSet {
    pub poses: Vec<RigidTransform>,
}

/// Below this `|α|` the line pair says nothing about the x-translation.
const MIN_1L2P_ALPHA: f64 = 1e-9;

/// One line intersection and two plane correspondences.
///
/// `l` and `planes1` live in scan 1, `m` and `planes2` in scan 2; the second
/// plane of each pair is the one mapped to `z = 0`. Returns the pose taking
/// scan 1 into scan 2.
pub fn solve_1l2p(
    l: &PluckerLine,
    m: &PluckerLine,
    planes1: (&Plane, &Plane),
    planes2: (&Plane, &Plane),
) -> Result<RigidTransform> {
    let frames = CanonicalFrames {
        pre1: canonicalize_1l2p(planes1.0, planes1.1)?,
        pre2: canonicalize_1l2p(planes2.0, planes2.1)?,
    };
    let lc = transform_line(&frames.pre1, l);
    let mc = transform_line(&frames.pre2, m);
    // With R = I and t = (t1, 0, 0) the residual is α t1 + β.
    let alpha = lc.direction.cross(&mc.direction).x;
    let beta = mc.direction.dot(&lc.moment) + mc.moment.dot(&lc.direction);
    if alpha.abs() < MIN_1L2P_ALPHA {
        return Err(Error::Degenerate(
            "line pair does not constrain translation along the plane intersection".into(),
        ));
    }
    let t1 = -beta / alpha;
    Ok(frames.uncanonicalize(&RigidTransform::from_translation(Vec3::new(t1, 0.0, 0.0))))
}

/// Polynomial in `(c, s) = (cos θ, sin θ)` of total degree ≤ 3;
/// `coef[i][j]` multiplies `cⁱ sʲ`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct CsPoly {
    coef: [[f64; 4]; 4],
}

impl CsPoly {
    /// `k + kc c + ks s`
    fn affine(k: f64, kc: f64, ks: f64) -> Self {
        let mut p = Self::default();
        p.coef[0][0] = k;
        p.coef[1][0] = kc;
        p.coef[0][1] = ks;
        p
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = Self::default();
        for i in 0..4 {
            for j in 0..4 - i {
                if self.coef[i][j] == 0.0 {
                    continue;
                }
                for k in 0..4 - i {
                    for l in 0..4 - j {
                        if i + j + k + l <= 3 {
                            out.coef[i + k][j + l] += self.coef[i][j] * o.coef[k][l];
                        }
                    }
                }
            }
        }
        out
    }

    fn add(&self, o: &Self) -> Self {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.coef[i][j] += o.coef[i][j];
            }
        }
        out
    }

    fn scale(&self, f: f64) -> Self {
        let mut out = *self;
        out.coef.iter_mut().flatten().for_each(|v| *v *= f);
        out
    }

    fn eval(&self, c: f64, s: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 - i {
                acc += self.coef[i][j] * c.powi(i as i32) * s.powi(j as i32);
            }
        }
        acc
    }

    /// `d/dθ` at `(cos θ, sin θ)`.
    fn eval_dtheta(&self, c: f64, s: f64) -> f64 {
        let mut dc = 0.0;
        let mut ds = 0.0;
        for i in 0..4 {
            for j in 0..4 - i {
                let k = self.coef[i][j];
                if i > 0 {
                    dc += k * i as f64 * c.powi(i as i32 - 1) * s.powi(j as i32);
                }
                if j > 0 {
                    ds += k * j as f64 * c.powi(i as i32) * s.powi(j as i32 - 1);
                }
            }
        }
        -s * dc + c * ds
    }

    fn max_abs(&self) -> f64 {
        self.coef.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `R_z(θ) v` as three affine forms in `(c, s)`.
fn rotate_affine(v: &Vec3) -> [CsPoly; 3] {
    [
        CsPoly::affine(0.0, v.x, -v.y),
        CsPoly::affine(0.0, v.y, v.x),
        CsPoly::affine(v.z, 0.0, 0.0),
    ]
}

fn dot_affine(u: &[CsPoly; 3], w: &Vec3) -> CsPoly {
    u[0].scale(w.x).add(&u[1].scale(w.y)).add(&u[2].scale(w.z))
}

/// Coefficients `(A, B, C)` of `A t1 + B t2 + C = 0` for one canonical pair
/// under `R = R_z(θ)`, `t = (t1, t2, 0)`.
fn pair_row(l: &PluckerLine, m: &PluckerLine) -> [CsPoly; 3] {
    let rd = rotate_affine(&l.direction);
    let rm = rotate_affine(&l.moment);
    let dm = &m.direction;
    // t · (R d_l × d_m)
    let a = rd[1].scale(dm.z).add(&rd[2].scale(-dm.y));
    let b = rd[2].scale(dm.x).add(&rd[0].scale(-dm.z));
    let c = dot_affine(&rm, dm).add(&dot_affine(&rd, &m.moment));
    [a, b, c]
}

fn det3(rows: &[[CsPoly; 3]; 3]) -> CsPoly {
    let minor = |r1: &[CsPoly; 3], r2: &[CsPoly; 3], i: usize, j: usize| {
        r1[i].mul(&r2[j]).add(&r1[j].mul(&r2[i]).scale(-1.0))
    };
    let [r0, r1, r2] = rows;
    r0[0]
        .mul(&minor(r1, r2, 1, 2))
        .add(&r0[1].mul(&minor(r1, r2, 0, 2)).scale(-1.0))
        .add(&r0[2].mul(&minor(r1, r2, 0, 1)))
}

/// Quartic in `s` whose roots contain every `sin θ` solving `det = 0` on the
/// unit circle.
///
/// The cubic part of the determinant is divisible by `c² + s²` (the rotation
/// acts on the xy-plane as a complex multiplication), so on the circle the
/// determinant reduces to a conic `P0(s) + c P1(s)` with `deg P0 ≤ 2`,
/// `deg P1 ≤ 1`. Squaring out `c` gives `P0² − (1 − s²) P1² = 0`.
fn reduce_to_quartic(det: &CsPoly) -> Quartic {
    let k = &det.coef;
    let l1 = 0.5 * (k[3][0] + k[1][2]);
    let l2 = 0.5 * (k[2][1] + k[0][3]);
    let a2 = k[0][2] - k[2][0];
    let a1 = k[0][1] + l2;
    let a0 = k[0][0] + k[2][0];
    let b1 = k[1][1];
    let b0 = k[1][0] + l1;
    Quartic::new(
        a2 * a2 + b1 * b1,
        2.0 * (a2 * a1 + b1 * b0),
        a1 * a1 + 2.0 * a2 * a0 - b1 * b1 + b0 * b0,
        2.0 * (a1 * a0 - b1 * b0),
        a0 * a0 - b0 * b0,
    )
}

/// Three line intersections and one plane correspondence.
///
/// Pairs are `(l in scan 1, m in scan 2)`; `p1` and `p1_prime` are the
/// corresponding plane in scans 1 and 2. All consistent poses (up to four)
/// are returned; choosing among them is left to the caller.
pub fn solve_3l1p(
    pairs: &[(PluckerLine, PluckerLine); 3],
    p1: &Plane,
    p1_prime: &Plane,
) -> Result<PoseCandidateSet> {
    let frames = CanonicalFrames {
        pre1: canonicalize_3l1p(p1),
        pre2: canonicalize_3l1p(p1_prime),
    };
    let canonical: Vec<(PluckerLine, PluckerLine)> = pairs
        .iter()
        .map(|(l, m)| (transform_line(&frames.pre1, l), transform_line(&frames.pre2, m)))
        .collect();
    let rows = [
        pair_row(&canonical[0].0, &canonical[0].1),
        pair_row(&canonical[1].0, &canonical[1].1),
        pair_row(&canonical[2].0, &canonical[2].1),
    ];
    let det = det3(&rows);
    let det_scale = det.max_abs();
    let row_scale: f64 = rows
        .iter()
        .map(|r| r.iter().map(|p| p.max_abs()).fold(0.0, f64::max))
        .product();
    if det_scale <= 1e-12 * row_scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Degenerate(
            "line pairs leave the in-plane rotation unconstrained".into(),
        ));
    }

    let quartic = reduce_to_quartic(&det);
    let roots = solve_quartic(&quartic).map_err(|_| {
        Error::Degenerate("elimination polynomial vanishes identically".into())
    })?;

    let mut found_angle = false;
    let mut candidates: Vec<(f64, RigidTransform)> = Vec::new();
    for s in roots.into_iter().filter(|s| s.abs() <= 1.0 + 1e-9) {
        let s = s.clamp(-1.0, 1.0);
        let c_abs = (1.0 - s * s).max(0.0).sqrt();
        for c in [c_abs, -c_abs] {
            let mut theta = s.atan2(c);
            for _ in 0..3 {
                let (st, ct) = theta.sin_cos();
                let d = det.eval_dtheta(ct, st);
                if d.abs() > 1e-300 {
                    let step = det.eval(ct, st) / d;
                    if step.abs() < 1e-2 {
                        theta -= step;
                    }
                }
            }
            let (st, ct) = theta.sin_cos();
            if det.eval(ct, st).abs() > 1e-6 * det_scale {
                continue;
            }
            found_angle = true;
            let Some(t) = back_substitute(&rows, ct, st) else {
                continue;
            };
            let rotation = Mat3::new(ct, -st, 0.0, st, ct, 0.0, 0.0, 0.0, 1.0);
            let pose_c = RigidTransform::new(rotation, Vec3::new(t.0, t.1, 0.0));
            let worst = rows
                .iter()
                .map(|r| {
                    let v = r[0].eval(ct, st) * t.0 + r[1].eval(ct, st) * t.1 + r[2].eval(ct, st);
                    let norm = r.iter().map(|p| p.eval(ct, st).abs()).sum::<f64>() * (1.0 + t.0.abs() + t.1.abs());
                    v.abs() / norm.max(1e-300)
                })
                .fold(0.0, f64::max);
            if worst > 1e-7 {
                continue;
            }
            if candidates.iter().any(|(_, p)| p.max_abs_diff(&pose_c) < 1e-9) {
                continue;
            }
            candidates.push((worst, pose_c));
        }
    }

    if candidates.is_empty() {
        return Err(if found_angle {
            Error::Degenerate("translation not recoverable from the line pairs".into())
        } else {
            Error::NoSolution
        });
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    candidates.truncate(4);
    Ok(PoseCandidateSet {
        poses: candidates
            .into_iter()
            .map(|(_, p)| frames.uncanonicalize(&p))
            .collect(),
    })
}

/// Least-squares `(t1, t2)` from all three equations at a fixed angle.
fn back_substitute(rows: &[[CsPoly; 3]; 3], c: f64, s: f64) -> Option<(f64, f64)> {
    let (mut aa, mut ab, mut bb, mut ac, mut bc) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for r in rows {
        let (a, b, k) = (r[0].eval(c, s), r[1].eval(c, s), r[2].eval(c, s));
        aa += a * a;
        ab += a * b;
        bb += b * b;
        ac += a * k;
        bc += b * k;
    }
    let det = aa * bb - ab * ab;
    if det <= 1e-12 * (aa * bb).max(f64::MIN_POSITIVE) || det == 0.0 {
        return None;
    }
    Some(((-ac * bb + bc * ab) / det, (-bc * aa + ac * ab) / det))
}
