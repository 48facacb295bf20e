use nalgebra::{SymmetricEigen, SVD};

use super::{Mat3, RigidTransform, Vec3};
use crate::error::{Error, Result};

/// Relative eigenvalue below which the source cloud counts as collinear.
const COLLINEAR_RATIO: f64 = 1e-14;

/// Least-squares rigid transform mapping `src` onto `dst` (Kabsch with
/// reflection correction).
pub fn fit_rigid_transform(src: &[Vec3], dst: &[Vec3]) -> Result<RigidTransform> {
    if src.len() != dst.len() {
        return Err(Error::InvalidInput(format!(
            "point lists differ in length ({} vs {})",
            src.len(),
            dst.len()
        )));
    }
    if src.len() < 3 {
        return Err(Error::Degenerate(format!(
            "rigid fit needs at least 3 point pairs, got {}",
            src.len()
        )));
    }

    let n = src.len() as f64;
    let cs = src.iter().sum::<Vec3>() / n;
    let cd = dst.iter().sum::<Vec3>() / n;

    let mut scatter = Mat3::zeros();
    let mut cross = Mat3::zeros();
    for (p, q) in src.iter().zip(dst) {
        let x = p - cs;
        scatter += x * x.transpose();
        cross += x * (q - cd).transpose();
    }

    let eig = SymmetricEigen::new(scatter);
    let mut ev = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
    ev.sort_by(|a, b| b.total_cmp(a));
    if !(ev[0] > 0.0) || ev[1] <= COLLINEAR_RATIO * ev[0] {
        return Err(Error::Degenerate(
            "source points are coincident or collinear".into(),
        ));
    }

    let svd = SVD::new(cross, true, true);
    let (Some(mut u), Some(v_t)) = (svd.u, svd.v_t) else {
        return Err(Error::Degenerate("SVD failed".into()));
    };
    // cross = U Σ Vᵀ, R = V Uᵀ; flip the weakest direction for reflections.
    if (v_t.transpose() * u.transpose()).determinant() < 0.0 {
        let k = svd.singular_values.imin();
        u.column_mut(k).neg_mut();
    }
    let rotation = v_t.transpose() * u.transpose();
    Ok(RigidTransform::new(rotation, cd - rotation * cs))
}

/// Sum of squared residuals `Σ |T(srcᵢ) - dstᵢ|²`.
pub fn alignment_cost(t: &RigidTransform, src: &[Vec3], dst: &[Vec3]) -> f64 {
    src.iter()
        .zip(dst)
        .map(|(p, q)| (t.apply(p) - q).norm_squared())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> Vec<Vec3> {
        vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 2.0, 0.0),
            Vec3::new(0.0, 0.0, 3.0),
        ]
    }

    #[test]
    fn identity_on_equal_sets() {
        let p = tetra();
        let t = fit_rigid_transform(&p, &p).unwrap();
        assert!(t.max_abs_diff(&RigidTransform::identity()) < 1e-14);
    }

    #[test]
    fn pure_translation() {
        let p = tetra();
        let q: Vec<_> = p.iter().map(|x| x + Vec3::new(1.0, 2.0, 3.0)).collect();
        let t = fit_rigid_transform(&p, &q).unwrap();
        assert!((t.rotation - Mat3::identity()).abs().max() < 1e-14);
        assert!((t.translation - Vec3::new(1.0, 2.0, 3.0)).norm() < 1e-14);
    }

    #[test]
    fn planar_points_are_fine() {
        let p = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ];
        let truth = RigidTransform::from_axis_angle(&Vec3::new(1.0, 1.0, 0.0), 2.5, Vec3::new(0.1, 0.2, 0.3));
        let q: Vec<_> = p.iter().map(|x| truth.apply(x)).collect();
        let t = fit_rigid_transform(&p, &q).unwrap();
        assert!(t.max_abs_diff(&truth) < 1e-12);
        assert!(t.is_proper_rotation(1e-12));
    }

    #[test]
    fn collinear_and_short_inputs_rejected() {
        let line: Vec<_> = (0..5).map(|i| Vec3::new(i as f64, 2.0 * i as f64, 0.0)).collect();
        assert!(matches!(fit_rigid_transform(&line, &line), Err(Error::Degenerate(_))));
        let two = &tetra()[..2];
        assert!(matches!(fit_rigid_transform(two, two), Err(Error::Degenerate(_))));
        let same = vec![Vec3::new(1.0, 1.0, 1.0); 4];
        assert!(fit_rigid_transform(&same, &same).is_err());
        assert!(matches!(
            fit_rigid_transform(&tetra(), &tetra()[..3]),
            Err(Error::InvalidInput(_))
        ));
    }
}
