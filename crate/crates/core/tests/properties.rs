use std::f64::consts::{PI, TAU};

use pflat_core::builders;
use pflat_core::classify;
use pflat_core::geodesic::{self, crossing_direction, edge_pairing};
use pflat_core::{Mat2, MinkowskiNorm, Vec2};
use proptest::prelude::*;

fn norm_strategy() -> impl Strategy<Value = MinkowskiNorm> {
    prop_oneof![
        (0.3f64..3.0, -0.5f64..0.5, 0.3f64..3.0).prop_map(|(a, b, c)| {
            let a12 = b * (a * c).sqrt();
            MinkowskiNorm::riemannian(Mat2::symmetric(a, a12, c)).unwrap()
        }),
        (0.5f64..2.0, -0.4f64..0.4, -0.4f64..0.4).prop_map(|(s, bx, by)| {
            MinkowskiNorm::randers(Mat2::scaled_identity(s * s), Vec2::new(bx * s, by * s)).unwrap()
        }),
        (0.0f64..1.8).prop_map(|c| MinkowskiNorm::quartic(c).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norms_are_positively_homogeneous(n in norm_strategy(), phi in 0.0f64..TAU, t in 0.01f64..100.0) {
        let y = Vec2::from_angle(phi);
        let (a, b) = (n.eval(y * t), t * n.eval(y));
        prop_assert!((a - b).abs() <= 1e-12 * b);
        prop_assert!(n.eval(y) > 0.0);
    }

    #[test]
    fn hessian_is_positive_on_the_indicatrix(n in norm_strategy(), phi in 0.0f64..TAU) {
        let h = n.hessian(Vec2::from_angle(phi)).unwrap();
        let (l1, l2) = h.eigenvalues();
        prop_assert!(l1 > 0.0 && l2 > 0.0);
    }

    #[test]
    fn crossing_solve_meets_its_target(n in norm_strategy(), phi in 0.0f64..TAU, frac in 0.01f64..0.99, up in any::<bool>()) {
        let e = Vec2::from_angle(phi);
        let (hi, lo) = (n.eval(e), -n.eval(-e));
        let target = lo + frac * (hi - lo);
        let side = if up { 1.0 } else { -1.0 };
        let u = crossing_direction(&n, e, side, target).unwrap();
        prop_assert!((n.eval(u) - 1.0).abs() <= 1e-12);
        prop_assert!((edge_pairing(&n, u, e) - target).abs() <= 1e-12);
        prop_assert!(e.cross(u) * side > 0.0);
    }

    #[test]
    fn crossing_back_and_forth_is_the_identity(f1 in norm_strategy(), f2 in norm_strategy(), phi in 0.1f64..(PI - 0.1)) {
        // a common chart; compatibility along the edge is not needed for a single crossing
        let e = Vec2::new(1.0, 0.0);
        let u = f1.unitize(Vec2::from_angle(phi)).unwrap();
        if let Ok(v) = geodesic::cross_edge(&f1, &f2, e, u) {
            let w = geodesic::cross_edge_backward(&f1, &f2, e, v).unwrap();
            prop_assert!((w - u).length() <= 1e-9);
        }
    }

    #[test]
    fn local_and_global_euler_characteristic_agree(seed in 0u64..1000, amount in 0.0f64..0.15) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (pts, faces) = builders::icosahedron_mesh();
        let pts: Vec<[f64; 3]> = pts.iter().map(|p| p.map(|c| c + rng.gen_range(-amount..=amount))).collect();
        let s = builders::euclidean_polyhedron(&pts, &faces).unwrap();
        prop_assert_eq!(s.euler_characteristic(), 2);
        prop_assert_eq!(s.euler_characteristic_local6(), 12);
        prop_assert!(s.validate(16).passed());
    }
}

#[test]
fn split_vertex_is_flat() {
    let s = builders::tetrahedron();
    let t = s.triangle(1).chart;
    let c = (t[0] + t[1] + t[2]) / 3.0 + (t[1] - t[0]) * 0.05;
    let refined = s.split_face(1, c, "m").unwrap();
    assert_eq!(refined.euler_characteristic(), 2);
    let v = refined.vertex_by_label("m").unwrap();
    let k = classify::vertex_curvature(&refined, v, 8).unwrap();
    assert!(k.mean.abs() < 1e-8 && k.stddev < 1e-8);
}

#[test]
fn split_vertex_in_a_quartic_face_is_flat() {
    let s = builders::cube(MinkowskiNorm::quartic(0.5).unwrap());
    assert_eq!(
        s.split_face(3, Vec2::new(0.7, 0.4), "m").unwrap_err(),
        pflat_core::SurfaceError::SplitOutside
    );
    let refined = s.split_face(3, Vec2::new(0.3, 0.6), "m").unwrap();
    let v = refined.vertex_by_label("m").unwrap();
    let k = classify::vertex_curvature(&refined, v, 12).unwrap();
    assert!(k.mean.abs() < 1e-8 && k.stddev < 1e-8, "{k:?}");
}

#[test]
fn mixed_surface_has_no_common_theta() {
    let r = MinkowskiNorm::randers(Mat2::IDENTITY, Vec2::new(0.0, 0.3)).unwrap();
    let s = builders::tetrahedron().with_face_norm(0, "r", r).unwrap();
    let (_, dev) = classify::theta_m(&s).single().unwrap();
    assert!(dev > 1e-3);
    let err = classify::gauss_bonnet_check(&s, Default::default()).unwrap_err();
    assert!(matches!(err, classify::ClassifyError::NotLandsberg { .. }));

    // an edge-compatible non-Landsberg surface still runs under force
    let m = builders::odd_mutation(&builders::tetrahedron(), 0, 0.1).unwrap();
    assert!(classify::gauss_bonnet_check(&m, Default::default()).is_err());
    let forced = classify::gauss_bonnet_check(
        &m,
        classify::GaussBonnetOptions {
            force: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(forced.hypothesis_violated);
    assert!(forced.theta_deviation > 1e-3);
}

#[test]
fn berwald_implies_landsberg_on_test_surfaces() {
    for s in [
        builders::tetrahedron(),
        builders::flat_torus(),
        builders::cube(MinkowskiNorm::quartic(0.5).unwrap()),
        builders::cube(MinkowskiNorm::quartic(1.7).unwrap()),
    ] {
        for g in 0..s.gluings().len() {
            let b = classify::berwald_residual(&s, g, 12, 1e-8).unwrap();
            if b.residual <= 1e-8 {
                assert!(classify::landsberg_defect(&s, g, 16).unwrap() <= 1e-6);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reversed_trace_retraces_on_riemannian_faces(seed in 0u64..1000, phi in 0.0f64..TAU, budget in 0.5f64..4.0) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (pts, faces) = builders::icosahedron_mesh();
        let maps: Vec<Mat2> = faces
            .iter()
            .map(|_| Mat2::new(rng.gen_range(0.6..1.6), rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4), rng.gen_range(0.6..1.6)))
            .collect();
        let s = builders::riemannian_polyhedron(&pts, &faces, &maps).unwrap();
        let face = rng.gen_range(0..s.face_count());
        let t = s.triangle(face).chart;
        let pos = (t[0] * 1.1 + t[1] * 0.9 + t[2]) / 3.0;
        let dir = s.norm_of(face).unitize(Vec2::from_angle(phi)).unwrap();
        let limits = geodesic::TraceLimits { max_length: budget, ..Default::default() };
        let fwd = geodesic::trace(&s, geodesic::DirectedPoint { face, pos, dir }, limits).unwrap();
        prop_assume!(matches!(fwd.termination, geodesic::Termination::LengthBudget));
        let last = fwd.segments.last().unwrap();
        let end_dir = fwd.events.last().map_or(dir, |e| e.u_out);
        let back_start = geodesic::DirectedPoint { face: last.face, pos: last.exit, dir: -end_dir };
        let back = geodesic::trace(&s, back_start, geodesic::TraceLimits { max_length: fwd.length(), ..limits }).unwrap();
        let end = back.segments.last().unwrap();
        prop_assert_eq!(end.face, face);
        prop_assert!((end.exit - pos).length() <= 1e-8, "{:?} vs {:?}", end.exit, pos);
        prop_assert_eq!(back.events.len(), fwd.events.len());
    }
}
