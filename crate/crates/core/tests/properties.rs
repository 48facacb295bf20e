//! Property tests for the invariants each module promises.

mod common;

use common::*;
use linereg::ap::{project_intersection, project_rigidity, solve_ap, ApConfig, SegmentPairSet};
use linereg::eval::{kitti_segment_errors, raycast_scene, relative_pose_error, Patch, SensorModel, SyntheticScene};
use linereg::features::{
    estimate_line_normals, fit_planes, fit_scanline_segments, FittedLine, LineFitParams, Orientation,
    PlaneFitParams, ScanLine,
};
use linereg::geometry::{
    alignment_cost, closest_points, epipolar_residual, fit_rigid_transform, plucker_from_segment,
    transform_line, transform_plane, LineSegment3D, Plane, RigidTransform, Vec3,
};
use linereg::minimal::{canonicalize_1l2p, canonicalize_3l1p, solve_1l2p, solve_3l1p};
use linereg::registration::chain_trajectory;
use linereg::scan::{depth_to_cloud, downsample, organize_lidar, DepthImage, DepthIntrinsics, GridConfig, OrganizedCloud};
use proptest::prelude::*;
use rand::Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn coord() -> impl Strategy<Value = f64> {
    -5.0..5.0f64
}

fn point() -> impl Strategy<Value = Vec3> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn segment() -> impl Strategy<Value = LineSegment3D> {
    (point(), point())
        .prop_filter("segment too short", |(a, b)| (a - b).norm() > 1e-3)
        .prop_map(|(a, b)| LineSegment3D::new(a, b).unwrap())
}

fn transform() -> impl Strategy<Value = RigidTransform> {
    any::<u64>().prop_map(|seed| any_transform(&mut rng(seed)))
}

/// Plane-to-plane agreement: normal angle and offset difference.
fn plane_gap(p: &Plane, q: &Plane) -> (f64, f64) {
    (p.normal_angle(q), (p.offset - q.offset).abs())
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn segment_lines_lie_on_the_klein_quadric(s in segment()) {
        let l = plucker_from_segment(&s);
        prop_assert!((l.direction.norm() - 1.0).abs() < 1e-12);
        prop_assert!(l.direction.dot(&l.moment).abs() < 1e-9);
    }

    #[test]
    fn line_and_plane_transforms_compose(s in segment(), t1 in transform(), t2 in transform(), n in point(), d in coord()) {
        prop_assume!(n.norm() > 1e-3);
        let both = t2.compose(&t1);
        let l = plucker_from_segment(&s);
        let once = transform_line(&both, &l);
        let twice = transform_line(&t2, &transform_line(&t1, &l));
        prop_assert!((once.direction - twice.direction).amax() < 1e-9);
        prop_assert!((once.moment - twice.moment).amax() < 1e-9);

        let p = Plane::new(n, d).unwrap();
        let (angle, offset) = plane_gap(&transform_plane(&both, &p), &transform_plane(&t2, &transform_plane(&t1, &p)));
        prop_assert!(angle < 1e-9 && offset < 1e-9);
    }

    #[test]
    fn transported_lines_meet(seed in any::<u64>()) {
        let mut r = rng(seed);
        let truth = any_transform(&mut r);
        let x = point_in_box(&mut r, 5.0);
        let (l, m) = intersecting_pair(&mut r, &truth, &x);
        prop_assert!(epipolar_residual(&m, &l, &truth).abs() < 1e-9);
    }

    #[test]
    fn closest_points_are_symmetric(s1 in segment(), s2 in segment()) {
        let ab = closest_points(&s1, &s2);
        let ba = closest_points(&s2, &s1);
        prop_assert!((ab.distance - ba.distance).abs() < 1e-9);
        prop_assert!((ab.p1 - ba.p2).norm() < 1e-9, "{:?} vs {:?}", ab, ba);
        prop_assert!((ab.p2 - ba.p1).norm() < 1e-9, "{:?} vs {:?}", ab, ba);
    }

    #[test]
    fn procrustes_beats_nearby_poses(seed in any::<u64>()) {
        let mut r = rng(seed);
        let truth = any_transform(&mut r);
        let src: Vec<Vec3> = (0..12).map(|_| point_in_box(&mut r, 3.0)).collect();
        let dst: Vec<Vec3> = src
            .iter()
            .map(|p| {
                let noise = point_in_box(&mut r, 0.05);
                truth.apply(p) + noise
            })
            .collect();
        let fit = fit_rigid_transform(&src, &dst).unwrap();
        prop_assert!(fit.is_proper_rotation(1e-9));
        let best = alignment_cost(&fit, &src, &dst);
        for _ in 0..100 {
            let nudge = random_transform(&mut r, 0.01, 0.01);
            prop_assert!(alignment_cost(&nudge.compose(&fit), &src, &dst) >= best - 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn rebinning_organized_points_changes_nothing(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cfg = GridConfig {
            azimuth_bins: 180,
            elevation_bins: 16,
            ..GridConfig::default()
        };
        let raw: Vec<Vec3> = (0..3000)
            .map(|_| {
                let dir = unit_vector(&mut r);
                dir * r.random_range(1.0..50.0)
            })
            .collect();
        let once = organize_lidar(&raw, &cfg).unwrap();
        let twice = organize_lidar(&once.present_points(), &cfg).unwrap();
        prop_assert_eq!(once.cells(), twice.cells());
    }

    #[test]
    fn depth_projection_round_trips(x in -2.0..2.0f64, y in -1.5..1.5f64, z in 0.5..8.0f64, u in 0usize..64, v in 0usize..48) {
        let k = DepthIntrinsics {
            fx: 60.0,
            fy: 58.0,
            cx: 31.5,
            cy: 23.5,
            depth_scale: 5000.0,
        };
        let p = Vec3::new(x, y, z);
        let (pu, pv, pz) = k.project(&p);
        prop_assert!((k.back_project(pu, pv, pz) - p).norm() < 1e-9);

        // Through an image: the cloud point of a pixel projects back onto it.
        let mut depth = DepthImage::new(64, 48);
        depth.set(u, v, z * k.depth_scale);
        let cloud = depth_to_cloud(&depth, &k);
        prop_assert_eq!(cloud.count_present(), 1);
        let q = cloud.get(v, u).unwrap();
        let (qu, qv, qz) = k.project(&q);
        prop_assert!((qu - u as f64).abs() < 1e-9 && (qv - v as f64).abs() < 1e-9 && (qz - z).abs() < 1e-9);
    }

    #[test]
    fn downsampling_composes(a in 1usize..4, b in 1usize..4, rm in 1usize..4, cm in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (rows, cols) = (a * b * rm, a * b * cm);
        let mut cloud = OrganizedCloud::new(rows, cols, "p");
        for row in 0..rows {
            for col in 0..cols {
                if r.random_bool(0.8) {
                    cloud.set(row, col, Some(point_in_box(&mut r, 10.0)));
                }
            }
        }
        prop_assert_eq!(downsample(&downsample(&cloud, a, a), b, b), downsample(&cloud, a * b, a * b));
    }
}

/// A scan-line of `pieces` straight runs with range noise and occasional
/// dropped cells, as one grid row of a LiDAR sweep over several walls.
fn piecewise_scanline(r: &mut impl Rng, pieces: usize, noise: f64) -> ScanLine {
    let mut points = Vec::new();
    let mut pos = 0;
    let mut start = point_in_box(r, 5.0);
    for _ in 0..pieces {
        let dir = unit_vector(r);
        let n = r.random_range(8..30);
        for k in 0..n {
            if r.random_bool(0.1) {
                pos += 1;
                continue;
            }
            let jitter = point_in_box(r, noise);
            points.push((pos, start + dir * (0.1 * k as f64) + jitter));
            pos += 1;
        }
        start += dir * (0.1 * n as f64) + point_in_box(r, 0.5);
    }
    ScanLine {
        orientation: Orientation::Horizontal,
        index: 0,
        points,
    }
}

fn fitted(seg: LineSegment3D, orientation: Orientation) -> FittedLine {
    FittedLine {
        plucker: plucker_from_segment(&seg),
        segment: seg,
        orientation,
        normal: None,
        inlier_count: 2,
        source_scanline: (orientation, 0),
        inlier_positions: vec![0, 1],
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn scanline_fits_claim_disjoint_inliers_near_their_lines(seed in any::<u64>(), pieces in 1usize..5) {
        let mut r = rng(seed);
        let line = piecewise_scanline(&mut r, pieces, 0.01);
        let params = LineFitParams {
            seed,
            ..LineFitParams::lidar()
        };
        let fits = fit_scanline_segments(&line, &params);
        let mut claimed = std::collections::HashSet::new();
        for f in &fits {
            prop_assert!(f.inlier_count >= params.min_inliers);
            for pos in &f.inlier_positions {
                prop_assert!(claimed.insert(*pos), "position {} claimed twice", pos);
                let p = line.points.iter().find(|(q, _)| q == pos).unwrap().1;
                let dist = (p - f.segment.a()).cross(&f.segment.direction()).norm();
                prop_assert!(dist <= params.inlier_dist + 1e-12, "inlier {} m from its line", dist);
            }
        }
    }

    #[test]
    fn line_normals_are_unit_and_orthogonal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut h: Vec<FittedLine> = (0..6)
            .map(|_| {
                let s = LineSegment3D::new(point_in_box(&mut r, 2.0), point_in_box(&mut r, 2.0)).unwrap();
                fitted(s, Orientation::Horizontal)
            })
            .collect();
        let mut v: Vec<FittedLine> = (0..6)
            .map(|_| {
                let s = LineSegment3D::new(point_in_box(&mut r, 2.0), point_in_box(&mut r, 2.0)).unwrap();
                fitted(s, Orientation::Vertical)
            })
            .collect();
        estimate_line_normals(&mut h, &mut v, 1.0);
        for l in h.iter().chain(&v) {
            if let Some(n) = l.normal {
                prop_assert!((n.norm() - 1.0).abs() < 1e-6);
                prop_assert!(n.dot(&l.segment.direction()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn noise_free_plane_fit_recovers_offset(seed in any::<u64>()) {
        let mut r = rng(seed);
        let normal = unit_vector(&mut r);
        let offset = r.random_range(-4.0..4.0);
        let truth = Plane::new(normal, offset).unwrap();
        let u = perpendicular(&mut r, &normal);
        let v = normal.cross(&u);
        let base = truth.closest_point_to_origin();
        let mut cloud = OrganizedCloud::new(20, 20, "plane");
        for row in 0..20 {
            for col in 0..20 {
                let p = base + u * (0.1 * row as f64 - 1.0) + v * (0.1 * col as f64 - 1.0);
                cloud.set(row, col, Some(p));
            }
        }
        let planes = fit_planes(&cloud, &PlaneFitParams {
            seed,
            ..PlaneFitParams::depth_camera()
        });
        prop_assert!(!planes.is_empty());
        let mut fit = planes[0].plane;
        if fit.normal.dot(&normal) < 0.0 {
            fit = fit.flipped();
        }
        prop_assert!((fit.offset - offset).abs() < 1e-6, "offset {} vs {}", fit.offset, offset);
        prop_assert!(truth.signed_distance(&planes[0].centroid).abs() < 1e-6);
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn rigidity_projection_keeps_frames_congruent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let truth = random_transform(&mut r, 0.2, 0.5);
        let pairs = intersecting_segments(&mut r, &truth, 7);
        let mut set = SegmentPairSet::new(&pairs);
        for i in 0..set.len() {
            let (s1, s2) = set.working_pair(i);
            set.set_working_pair(i, project_intersection(&s1, &s2, 1.0));
        }
        project_rigidity(&mut set).unwrap();
        let ends = |s: &SegmentPairSet, work: bool, frame: usize| -> Vec<Vec3> {
            (0..s.len())
                .flat_map(|i| {
                    let (s1, s2) = if work { s.working_pair(i) } else { s.original_pair(i) };
                    if frame == 0 { s1.endpoints() } else { s2.endpoints() }
                })
                .collect()
        };
        for frame in 0..2 {
            let (orig, work) = (ends(&set, false, frame), ends(&set, true, frame));
            for i in 0..orig.len() {
                for j in i + 1..orig.len() {
                    let d = (orig[i] - orig[j]).norm() - (work[i] - work[j]).norm();
                    prop_assert!(d.abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn ap_commutes_with_a_common_frame_change(seed in any::<u64>()) {
        let mut r = rng(seed);
        let truth = random_transform(&mut r, 10f64.to_radians(), 0.5);
        let pairs = intersecting_segments(&mut r, &truth, 7);
        let cfg = ApConfig {
            epsilon: 1e-10,
            gap_tolerance: 1e-4,
            ..ApConfig::lidar()
        };
        let base = solve_ap(SegmentPairSet::new(&pairs), &cfg).unwrap();
        // Only instances AP solves are informative; stalls are covered by
        // the acceptance rate.
        prop_assume!(base.converged && base.transform.max_abs_diff(&truth) < 1e-6);
        for (s1, s2) in &pairs {
            let (m, l) = (plucker_from_segment(s2), plucker_from_segment(s1));
            prop_assert!(epipolar_residual(&m, &l, &base.transform).abs() < 1e-6);
        }

        let g = any_transform(&mut r);
        let moved: Vec<_> = pairs.iter().map(|(s1, s2)| (s1.transformed(&g), s2.transformed(&g))).collect();
        let conj = solve_ap(SegmentPairSet::new(&moved), &cfg).unwrap();
        let expected = g.compose(&base.transform).compose(&g.inverse());
        prop_assert!(conj.transform.max_abs_diff(&expected) < 1e-6, "{:?} vs {:?}", conj.transform, expected);
    }
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn one_line_two_planes_poses_satisfy_their_constraints(seed in any::<u64>()) {
        let inst = one_line_two_planes(&mut rng(seed));
        let (a1, b1) = inst.planes1;
        let (a2, b2) = inst.planes2;
        let pose = solve_1l2p(&inst.l, &inst.m, (&a1, &b1), (&a2, &b2)).unwrap();
        for (p, q) in [(a1, a2), (b1, b2)] {
            let (angle, offset) = plane_gap(&p.transformed(&pose), &q);
            prop_assert!(angle < 1e-9 && offset < 1e-9);
        }
        prop_assert!(transform_line(&pose, &inst.l).distance_to(&inst.m) < 1e-9);
        prop_assert!(pose.max_abs_diff(&inst.truth) < 1e-8);
    }

    #[test]
    fn three_lines_one_plane_poses_satisfy_their_constraints(seed in any::<u64>()) {
        let inst = three_lines_one_plane(&mut rng(seed));
        let set = solve_3l1p(&inst.pairs, &inst.p1, &inst.p1_prime).unwrap();
        prop_assert!(set.poses.len() <= 4);
        prop_assert!(set.poses.iter().any(|p| p.max_abs_diff(&inst.truth) < 1e-6));
        for pose in &set.poses {
            let (angle, offset) = plane_gap(&inst.p1.transformed(pose), &inst.p1_prime);
            prop_assert!(angle < 1e-9 && offset < 1e-9);
            for (l, m) in &inst.pairs {
                prop_assert!(transform_line(pose, l).distance_to(m) < 1e-9);
            }
        }
    }

    #[test]
    fn minimal_solvers_commute_with_a_common_frame_change(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = one_line_two_planes(&mut r);
        let g = any_transform(&mut r);
        let (a1, b1) = inst.planes1;
        let (a2, b2) = inst.planes2;
        let base = solve_1l2p(&inst.l, &inst.m, (&a1, &b1), (&a2, &b2)).unwrap();
        let mv = |p: &Plane| p.transformed(&g);
        let moved = solve_1l2p(
            &transform_line(&g, &inst.l),
            &transform_line(&g, &inst.m),
            (&mv(&a1), &mv(&b1)),
            (&mv(&a2), &mv(&b2)),
        )
        .unwrap();
        prop_assert!(moved.max_abs_diff(&g.compose(&base).compose(&g.inverse())) < 1e-8);

        let inst = three_lines_one_plane(&mut r);
        let base = solve_3l1p(&inst.pairs, &inst.p1, &inst.p1_prime).unwrap();
        let pairs = inst.pairs.map(|(l, m)| (transform_line(&g, &l), transform_line(&g, &m)));
        let moved = solve_3l1p(&pairs, &inst.p1.transformed(&g), &inst.p1_prime.transformed(&g)).unwrap();
        for pose in &base.poses {
            let expected = g.compose(pose).compose(&g.inverse());
            // Spurious roots can sit kilometers away; compare those relative
            // to their size.
            let tol = 1e-8 * (1.0 + expected.translation.norm());
            prop_assert!(moved.poses.iter().any(|p| p.max_abs_diff(&expected) < tol));
        }
    }

    #[test]
    fn canonical_frames_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n1 = unit_vector(&mut r);
        let n2 = perpendicular(&mut r, &n1);
        let (d1, d2) = (r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
        let (p1, p2) = (Plane::new(n1, d1).unwrap(), Plane::new(n2, d2).unwrap());
        for pre in [canonicalize_1l2p(&p1, &p2).unwrap(), canonicalize_3l1p(&p2)] {
            prop_assert!(pre.inverse().compose(&pre).max_abs_diff(&RigidTransform::identity()) < 1e-12);
            // The mapped plane is z = 0 with normal +z.
            let c = p2.transformed(&pre);
            prop_assert!((c.normal - Vec3::z()).norm() < 1e-12 && c.offset.abs() < 1e-12);
        }
        // 1L2P also puts the planes' intersection line on the x-axis.
        let pre = canonicalize_1l2p(&p1, &p2).unwrap();
        let c1 = p1.transformed(&pre);
        prop_assert!(c1.normal.x.abs() < 1e-12 && c1.offset.abs() < 1e-12);
    }
}

fn random_trajectory(r: &mut impl Rng, len: usize) -> Vec<RigidTransform> {
    (0..len).map(|_| random_transform(r, 0.2, 2.0)).collect()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn chaining_matches_matrix_products(seed in any::<u64>(), len in 1usize..30) {
        let steps = random_trajectory(&mut rng(seed), len);
        let traj = chain_trajectory(&steps);
        let mut acc = nalgebra::Matrix4::identity();
        prop_assert_eq!(traj.pose(0), &RigidTransform::identity());
        for (k, s) in steps.iter().enumerate() {
            acc *= s.to_matrix4();
            prop_assert!((traj.pose(k + 1).to_matrix4() - acc).amax() < 1e-9);
        }
    }

    #[test]
    fn trajectory_metrics_ignore_a_global_transform(seed in any::<u64>(), len in 2usize..40) {
        let mut r = rng(seed);
        let gt = chain_trajectory(&random_trajectory(&mut r, len));
        let noisy: Vec<_> = gt
            .relative_steps()
            .iter()
            .map(|s| {
                let e = random_transform(&mut r, 0.01, 0.05);
                s.compose(&e)
            })
            .collect();
        let est = chain_trajectory(&noisy);

        let zero = relative_pose_error(&gt, &gt).unwrap();
        prop_assert!(zero.per_step.iter().all(|e| e.rotation_err == 0.0 && e.translation_err == 0.0));

        let lengths = [1.0, 2.0, 5.0, 10.0];
        let g = any_transform(&mut r);
        let plain = kitti_segment_errors(&est, &gt, &lengths).unwrap();
        let moved = kitti_segment_errors(&est.transformed(&g), &gt.transformed(&g), &lengths).unwrap();
        match (plain, moved) {
            (None, None) => {}
            (Some(a), Some(b)) => {
                prop_assert_eq!(a.segments, b.segments);
                prop_assert!((a.translation_percent - b.translation_percent).abs() < 1e-6);
                prop_assert!((a.rotation_deg_per_m - b.rotation_deg_per_m).abs() < 1e-6);
            }
            _ => prop_assert!(false, "segment count changed under a global transform"),
        }
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn noise_free_raycast_lands_on_patches(seed in any::<u64>()) {
        let mut r = rng(seed);
        let patches = vec![
            Patch::new(Vec3::new(-3.0, -3.0, 0.0), Vec3::new(6.0, 0.0, 0.0), Vec3::new(0.0, 6.0, 0.0)).unwrap(),
            Patch::new(Vec3::new(3.0, -3.0, 0.0), Vec3::new(0.0, 6.0, 0.0), Vec3::new(0.0, 0.0, 3.0)).unwrap(),
            Patch::new(Vec3::new(-3.0, 3.0, 0.0), Vec3::new(6.0, 0.0, 0.0), Vec3::new(0.0, 0.0, 3.0)).unwrap(),
        ];
        let scene = SyntheticScene {
            name: "corner".into(),
            patches: patches.clone(),
            sensor: SensorModel::Depth {
                intrinsics: DepthIntrinsics {
                    fx: 40.0,
                    fy: 40.0,
                    cx: 31.5,
                    cy: 23.5,
                    depth_scale: 5000.0,
                },
                width: 64,
                height: 48,
            },
            noise_sigma: 0.0,
            seed,
        };
        let heading = r.random_range(0.3..1.2);
        let pose = RigidTransform::new(
            linereg::eval::camera_rotation(heading, r.random_range(0.1..0.5)),
            Vec3::new(r.random_range(-2.0..0.0), r.random_range(-2.0..0.0), r.random_range(0.5..2.0)),
        );
        let scan = raycast_scene(&scene, &pose);
        let cols = scan.cloud.cols();
        prop_assert!(scan.cloud.count_present() > 0);
        for (row, col, p) in scan.cloud.iter_present() {
            let id = scan.patch_ids[row * cols + col].unwrap();
            let world = pose.apply(&p);
            let patch = &patches[id];
            prop_assert!(patch.normal().dot(&(world - patch.origin)).abs() < 1e-9);
            prop_assert!(patch.contains(&world));
        }
    }
}
