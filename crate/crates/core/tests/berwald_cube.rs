use pflat_core::builders;
use pflat_core::classify::{self, GaussBonnetOptions, Thresholds};
use pflat_core::MinkowskiNorm;

fn quartic_cube() -> pflat_core::Surface {
    builders::cube(MinkowskiNorm::quartic(0.5).unwrap())
}

#[test]
fn quartic_cube_is_berwald() {
    let s = quartic_cube();
    let r = classify::classify(&s, 16, Thresholds::default()).unwrap();
    let worst_b = r.berwald.iter().map(|e| e.edge.value).fold(0.0, f64::max);
    let worst_l = r.landsberg.iter().map(|e| e.value).fold(0.0, f64::max);
    eprintln!("berwald {worst_b:e} landsberg {worst_l:e}");
    assert!(r.is_berwald && r.is_landsberg);
    let (_, dev) = r.theta.single().unwrap();
    assert!(dev <= 1e-8);
}

#[test]
fn quartic_cube_gauss_bonnet() {
    let s = quartic_cube();
    let opts = GaussBonnetOptions {
        directions: 36,
        ..Default::default()
    };
    let r = classify::gauss_bonnet_check(&s, opts).unwrap();
    eprintln!("sumK {} thchi {} res {:e} adj {:e}", r.sum_k, r.theta_chi, r.residual, r.max_adjacent_residual);
    assert!(r.residual <= 1e-5);
    assert!(r.max_adjacent_residual <= 1e-6);
    for v in &r.curvature.vertices {
        eprintln!("{} {} {:e} {:e}", v.label, v.mean, v.stddev, (v.l_plus - v.l_minus).abs());
        assert!(v.stddev <= 1e-7);
        assert!((v.l_plus - v.l_minus).abs() <= 1e-8);
    }
}

#[test]
fn mutated_face_breaks_landsberg() {
    let s = builders::odd_mutation(&quartic_cube(), 0, 0.05).unwrap();
    assert!(s.validate(64).passed(), "{:?}", s.validate(64).failures().collect::<Vec<_>>());
    for g in 0..s.gluings().len() {
        let ((fa, _), (fb, _)) = s.gluing_sides(g);
        if fa == 0 || fb == 0 {
            let d = classify::landsberg_defect(&s, g, 32).unwrap();
            eprintln!("edge {g} defect {d:e}");
            assert!(d > 1e-3);
        }
    }
    let t = classify::curvature_table(&s, 36).unwrap();
    let worst = t.vertices.iter().map(|v| v.stddev).fold(0.0, f64::max);
    eprintln!("worst stddev {worst:e}");
    assert!(worst > 1e-3);
}
