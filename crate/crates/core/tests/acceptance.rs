//! Acceptance suite. Every criterion prints one line and the test fails if
//! any criterion fails. Oracles are classical: angle defects from 3D
//! geometry, Snell's law, direct 1-D minimization, Descartes' total defect.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use pflat_core::builders;
use pflat_core::classify::{self, GaussBonnetOptions, Thresholds};
use pflat_core::cone::{self, ConeDirection, ConeTermination, DirSign, ExtensionKind, Side, TangentCone};
use pflat_core::geodesic::{self, DirectedPoint, PathError, TraceLimits};
use pflat_core::{Mat2, MinkowskiNorm, Surface, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corner_angle(p: [f64; 3], a: [f64; 3], b: [f64; 3]) -> f64 {
    let u = [a[0] - p[0], a[1] - p[1], a[2] - p[2]];
    let v = [b[0] - p[0], b[1] - p[1], b[2] - p[2]];
    let dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    let nu = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    let nv = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (dot / (nu * nv)).clamp(-1.0, 1.0).acos()
}

fn angle_defects(points: &[[f64; 3]], faces: &[[usize; 3]]) -> Vec<f64> {
    let mut sum = vec![0.0; points.len()];
    for f in faces {
        for k in 0..3 {
            let (p, a, b) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
            sum[p] += corner_angle(points[p], points[a], points[b]);
        }
    }
    sum.iter().map(|s| TAU - s).collect()
}

fn random_map(rng: &mut ChaCha8Rng) -> Mat2 {
    let t: f64 = rng.gen_range(0.0..TAU);
    let (s1, s2): (f64, f64) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
    let k: f64 = rng.gen_range(-0.5..0.5);
    let rot = Mat2::new(t.cos(), -t.sin(), t.sin(), t.cos());
    rot.mul_mat(&Mat2::new(s1, k, 0.0, s2))
}

fn jitter(points: &[[f64; 3]], amount: f64, rng: &mut ChaCha8Rng) -> Vec<[f64; 3]> {
    points
        .iter()
        .map(|p| p.map(|c| c + rng.gen_range(-amount..amount)))
        .collect()
}

fn regge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    let mut count = 0;
    for i in 0..5 {
        let (pts, faces) = if i % 2 == 0 {
            builders::icosahedron_mesh()
        } else {
            builders::octahedron_mesh()
        };
        let pts = jitter(&pts, 0.12, &mut rng);
        let maps: Vec<Mat2> = (0..faces.len()).map(|_| random_map(&mut rng)).collect();
        let s = builders::riemannian_polyhedron(&pts, &faces, &maps).map_err(|e| e.to_string())?;
        let oracle = angle_defects(&pts, &faces);
        for (v, vert) in s.vertices().iter().enumerate() {
            let idx: usize = vert.label[1..].parse().unwrap();
            let k = classify::vertex_curvature(&s, v, 4).map_err(|e| e.to_string())?;
            for val in &k.values {
                worst = worst.max((val - oracle[idx]).abs());
            }
            count += 1;
        }
    }
    ensure(worst <= 1e-7, || format!("worst |K - defect| = {worst:.3e}"))?;
    Ok(format!("{count} vertices on 5 surfaces, worst |K - defect| = {worst:.2e}"))
}

fn gauss_bonnet_euclidean() -> Outcome {
    let opts = GaussBonnetOptions::default();
    let gb = |s: &Surface| classify::gauss_bonnet_check(s, opts).map_err(|e| e.to_string());
    let mut lines = Vec::new();
    let limit = Duration::from_secs(5);

    let t0 = Instant::now();
    let r = gb(&builders::tetrahedron())?;
    ensure(r.chi == 2 && (r.theta - TAU).abs() <= 1e-9, || format!("tetrahedron chi {} theta {}", r.chi, r.theta))?;
    ensure((r.sum_k - 4.0 * PI).abs() <= 1e-6, || format!("tetrahedron sum K {}", r.sum_k))?;
    ensure(t0.elapsed() < limit, || "tetrahedron too slow".into())?;
    lines.push(format!("tetra {:.1e}", (r.sum_k - 4.0 * PI).abs()));

    let t0 = Instant::now();
    let r = gb(&builders::cube(MinkowskiNorm::euclidean()))?;
    ensure((r.sum_k - 4.0 * PI).abs() <= 1e-6, || format!("cube sum K {}", r.sum_k))?;
    ensure(r.curvature.vertices.len() == 8, || "cube vertex count".into())?;
    for v in &r.curvature.vertices {
        ensure((v.mean - PI / 2.0).abs() <= 1e-7, || format!("cube vertex {} K {}", v.label, v.mean))?;
    }
    ensure(t0.elapsed() < limit, || "cube too slow".into())?;
    lines.push(format!("cube {:.1e}", (r.sum_k - 4.0 * PI).abs()));

    let t0 = Instant::now();
    let r = gb(&builders::octahedron())?;
    for v in &r.curvature.vertices {
        ensure((v.mean - TAU / 3.0).abs() <= 1e-7, || format!("octahedron vertex {} K {}", v.label, v.mean))?;
    }
    ensure((r.sum_k - 4.0 * PI).abs() <= 1e-6, || format!("octahedron sum K {}", r.sum_k))?;
    ensure(t0.elapsed() < limit, || "octahedron too slow".into())?;
    lines.push(format!("octa {:.1e}", (r.sum_k - 4.0 * PI).abs()));

    let t0 = Instant::now();
    let r = gb(&builders::flat_torus())?;
    ensure(r.chi == 0 && r.sum_k.abs() <= 1e-8, || format!("torus chi {} sum K {}", r.chi, r.sum_k))?;
    ensure(t0.elapsed() < limit, || "torus too slow".into())?;
    lines.push(format!("torus {:.1e}", r.sum_k.abs()));
    Ok(lines.join(", "))
}

fn quartic_cube() -> Surface {
    builders::cube(MinkowskiNorm::quartic(0.5).unwrap())
}

fn gauss_bonnet_berwald() -> Outcome {
    let s = quartic_cube();
    let c = classify::classify(&s, 16, Thresholds::default()).map_err(|e| e.to_string())?;
    let worst_b = c.berwald.iter().map(|e| e.edge.value).fold(0.0, f64::max);
    ensure(c.is_berwald && worst_b <= 1e-8, || format!("berwald residual {worst_b:.3e}"))?;
    let (_, dev) = c.theta.single().ok_or("disconnected")?;
    ensure(dev <= 1e-8, || format!("theta deviation {dev:.3e}"))?;
    let r = classify::gauss_bonnet_check(&s, GaussBonnetOptions::default()).map_err(|e| e.to_string())?;
    ensure(r.residual <= 1e-5, || format!("gauss-bonnet residual {:.3e}", r.residual))?;
    Ok(format!(
        "berwald {worst_b:.1e}, theta dev {dev:.1e}, sum K {:.9} vs {:.9}",
        r.sum_k, r.theta_chi
    ))
}

/// `argmin_s |p - (s,0)| + n|(s,0) - q|`, located by bisection on the
/// derivative of this convex function.
fn snell_oracle(p: Vec2, q: Vec2, n: f64) -> f64 {
    let df = |s: f64| {
        let x = Vec2::new(s, 0.0);
        (s - p.x) / (x - p).length() - n * (q.x - s) / (q - x).length()
    };
    let (mut a, mut b) = (p.x.min(q.x) - 1.0, p.x.max(q.x) + 1.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if df(m) > 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

fn snell() -> Outcome {
    let n = 2.0;
    let f1 = MinkowskiNorm::euclidean();
    let f2 = MinkowskiNorm::riemannian(Mat2::scaled_identity(n * n)).unwrap();
    let inc = 30f64.to_radians();
    let u = Vec2::new(inc.sin(), inc.cos());
    let v = geodesic::cross_edge(&f1, &f2, Vec2::new(1.0, 0.0), u).map_err(|e| e.to_string())?;
    let refr = v.x.atan2(v.y);
    let expect = 0.25f64.asin();
    ensure((refr - expect).abs() <= 1e-9, || format!("refraction {refr} vs {expect}"))?;
    // a ray from p through the predicted crossing, continued along v, must be
    // the minimizer of the two-segment length
    let p = Vec2::new(0.0, -1.0);
    let x = p + u * (1.0 / inc.cos());
    let q = x + v.normalized() * 1.5;
    let s = snell_oracle(p, q, n);
    ensure((s - x.x).abs() <= 1e-8, || format!("crossing {} vs oracle {s}", x.x))?;
    Ok(format!("refraction error {:.1e}, crossing error {:.1e}", (refr - expect).abs(), (s - x.x).abs()))
}

fn random_edge_norm(rng: &mut ChaCha8Rng) -> MinkowskiNorm {
    // F(±e₁) = 1 for every choice keeps the shared edge compatible
    let a12: f64 = rng.gen_range(-0.6..0.6);
    let a22: f64 = a12 * a12 + rng.gen_range(0.2..2.0);
    let a = Mat2::symmetric(1.0, a12, a22);
    match rng.gen_range(0..3) {
        0 => MinkowskiNorm::riemannian(a).unwrap(),
        1 => {
            let by = rng.gen_range(-0.6..0.6) * (a22 - a12 * a12).sqrt();
            MinkowskiNorm::randers(a, Vec2::new(0.0, by)).unwrap()
        }
        _ => MinkowskiNorm::quartic(rng.gen_range(0.0..1.5)).unwrap(),
    }
}

fn random_two_face(rng: &mut ChaCha8Rng) -> Surface {
    let below = Vec2::new(rng.gen_range(-0.3..1.3), rng.gen_range(-1.5..-0.3));
    let above = Vec2::new(rng.gen_range(-0.3..1.3), rng.gen_range(0.3..1.5));
    builders::two_face(random_edge_norm(rng), random_edge_norm(rng), below, above).unwrap()
}

fn inside(rng: &mut ChaCha8Rng, t: &[Vec2; 3]) -> Vec2 {
    let (mut a, mut b): (f64, f64) = (rng.gen_range(0.05..0.9), rng.gen_range(0.05..0.9));
    if a + b > 0.95 {
        a = 0.95 - a;
        b = 0.95 - b;
    }
    t[0] + (t[1] - t[0]) * a + (t[2] - t[0]) * b
}

fn convexity_and_tracing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_convex = 0.0f64;
    let mut worst_mono = 0.0f64;
    for _ in 0..1000 {
        let s = random_two_face(&mut rng);
        let p = inside(&mut rng, &s.triangle(0).chart);
        let q = inside(&mut rng, &s.triangle(1).chart);
        let (f1, f2) = (s.norm_of(0), s.norm_of(1));
        let f = |t: f64| f1.eval(Vec2::new(t, 0.0) - p) + f2.eval(q - Vec2::new(t, 0.0));
        let h = 1e-3;
        for j in 1..50 {
            let t = j as f64 / 50.0;
            worst_convex = worst_convex.max(-(f(t - h) - 2.0 * f(t) + f(t + h)));
        }
        let samples = classify::edge_map_samples(&s, 0, 64).map_err(|e| e.to_string())?;
        let ((fa, ea), _) = s.gluing_sides(0);
        let (_, ebv) = s.matched_edge_vectors(fa, ea).unwrap();
        let ang: Vec<f64> = samples.iter().map(|x| ebv.angle_to(x.u_out).abs()).collect();
        for w in ang.windows(2) {
            worst_mono = worst_mono.max(w[0] - w[1]);
        }
    }
    ensure(worst_convex <= 1e-7, || format!("second difference {:.3e}", -worst_convex))?;
    ensure(worst_mono <= 1e-7, || format!("crossing map not monotone by {worst_mono:.3e}"))?;

    let mut agreed = 0;
    let mut worst_len = 0.0f64;
    let mut worst_end = 0.0f64;
    while agreed < 200 {
        let s = random_two_face(&mut rng);
        let p = inside(&mut rng, &s.triangle(0).chart);
        let q = inside(&mut rng, &s.triangle(1).chart);
        let path = match geodesic::min_path_over_sequence(&s, &[0, 1], &[2], p, q) {
            Ok(r) => r,
            Err(PathError::VertexOnPath { .. }) => continue,
            Err(e) => return Err(format!("{e:?}")),
        };
        let x = path.crossings[0].0;
        let limits = TraceLimits {
            max_length: path.length,
            ..TraceLimits::default()
        };
        let poly = geodesic::trace(&s, DirectedPoint { face: 0, pos: p, dir: x - p }, limits).map_err(|e| e.to_string())?;
        let end = poly.segments.last().unwrap();
        worst_len = worst_len.max((poly.length() - path.length).abs());
        worst_end = worst_end.max(if end.face == 1 { (end.exit - q).length() } else { f64::INFINITY });
        agreed += 1;
    }
    ensure(worst_len <= 1e-7 && worst_end <= 1e-7, || {
        format!("tracer vs minimizer: length {worst_len:.3e}, endpoint {worst_end:.3e}")
    })?;
    Ok(format!(
        "1000 instances: convexity {worst_convex:.1e}, monotonicity {worst_mono:.1e}; 200 traces: length {worst_len:.1e}, endpoint {worst_end:.1e}"
    ))
}

fn test_cones() -> Vec<(&'static str, TangentCone)> {
    let h = PI / 2.0;
    vec![
        ("flat", TangentCone::euclidean(&[h; 4]).unwrap()),
        ("tetra", TangentCone::euclidean(&[PI / 3.0; 3]).unwrap()),
        ("cube", TangentCone::euclidean(&[h; 3]).unwrap()),
        ("saddle", TangentCone::euclidean(&[h; 5]).unwrap()),
    ]
}

fn random_ray(rng: &mut ChaCha8Rng, c: &TangentCone, k: usize) -> Vec2 {
    let s = &c.sectors[k];
    let t: f64 = rng.gen_range(0.02..0.98);
    s.a.normalized().rotated(s.orientation() * t * s.opening())
}

fn finite_crossing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut most = 0;
    let mut worst = 0.0f64;
    for (name, c) in test_cones() {
        for _ in 0..500 {
            let k = rng.gen_range(0..c.len());
            let p = random_ray(&mut rng, &c, k) * rng.gen_range(0.1..10.0);
            let d = Vec2::from_angle(rng.gen_range(0.0..TAU));
            if (p.normalized().cross(d)).abs() < 1e-6 {
                continue;
            }
            let line = cone::cone_line(&c, k, p, d, cone::CONE_CROSSING_CAP).map_err(|e| format!("{name}: {e}"))?;
            ensure(line.termination == ConeTermination::Free, || format!("{name}: trace hit the cap"))?;
            most = most.max(line.crossings());

            let k = rng.gen_range(0..c.len());
            let r = random_ray(&mut rng, &c, k);
            let sign = if rng.gen_bool(0.5) { DirSign::Incoming } else { DirSign::Outgoing };
            let v = ConeDirection {
                sector: k,
                dir: if sign == DirSign::Incoming { -r } else { r },
                sign,
            };
            let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
            let a = cone::perturbation_with_eps(&c, v, side, 1e-3).map_err(|e| format!("{name}: {e}"))?;
            let b = cone::perturbation_with_eps(&c, v, side, 1e-4).map_err(|e| format!("{name}: {e}"))?;
            worst = worst
                .max((a.swept.plus - b.swept.plus).abs())
                .max((a.swept.minus - b.swept.minus).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("swept angle changed by {worst:.3e} under rescaling"))?;
    Ok(format!("max crossings {most}, worst swept-angle change {worst:.1e}"))
}

fn extension_criterion() -> Outcome {
    let h = PI / 2.0;
    let cases = [
        ("flat", TangentCone::euclidean(&[h; 4]).unwrap(), 0.0, ExtensionKind::Unique),
        ("tetra", TangentCone::euclidean(&[PI / 3.0; 3]).unwrap(), PI, ExtensionKind::None),
        ("saddle", TangentCone::euclidean(&[h; 5]).unwrap(), -h, ExtensionKind::InfinitelyMany),
    ];
    let mut worst = 0.0f64;
    for (name, c, k_expected, kind) in cases {
        for sign in [DirSign::Incoming, DirSign::Outgoing] {
            for v in c.sample_directions(12, sign) {
                let e = cone::extension_set(&c, v).map_err(|e| format!("{name}: {e}"))?;
                ensure(e.kind == kind, || format!("{name}: classified {:?}", e.kind))?;
                ensure((e.curvature.k - k_expected).abs() <= 1e-8, || {
                    format!("{name}: K = {}", e.curvature.k)
                })?;
                worst = worst.max((e.measure - (-e.curvature.k).max(0.0)).abs());
            }
        }
    }
    ensure(worst <= 1e-8, || format!("gap measure off by {worst:.3e}"))?;
    Ok(format!("unique/none/infinitely-many as expected, worst gap error {worst:.1e}"))
}

fn landsberg_invariance() -> Outcome {
    let s = quartic_cube();
    let t = classify::curvature_table(&s, 36).map_err(|e| e.to_string())?;
    let sd = t.vertices.iter().map(|v| v.stddev).fold(0.0, f64::max);
    let dl = t.vertices.iter().map(|v| (v.l_plus - v.l_minus).abs()).fold(0.0, f64::max);
    ensure(sd <= 1e-7, || format!("K stddev {sd:.3e}"))?;
    ensure(dl <= 1e-8, || format!("|l+ - l-| {dl:.3e}"))?;

    let m = builders::odd_mutation(&s, 0, 0.05).map_err(|e| e.to_string())?;
    let mut least = f64::INFINITY;
    for g in 0..m.gluings().len() {
        let ((fa, _), (fb, _)) = m.gluing_sides(g);
        if fa == 0 || fb == 0 {
            least = least.min(classify::landsberg_defect(&m, g, 32).map_err(|e| e.to_string())?);
        }
    }
    ensure(least > 1e-3, || format!("mutated edge defect {least:.3e}"))?;
    let tm = classify::curvature_table(&m, 36).map_err(|e| e.to_string())?;
    let msd = tm.vertices.iter().map(|v| v.stddev).fold(0.0, f64::max);
    ensure(msd > 1e-3, || format!("mutated K stddev {msd:.3e}"))?;
    Ok(format!(
        "stddev {sd:.1e}, |l+ - l-| {dl:.1e}; mutated: edge defect >= {least:.2e}, stddev {msd:.2e}"
    ))
}

fn adjacent_vertices() -> Outcome {
    let surfaces = [
        ("tetra", builders::tetrahedron()),
        ("cube", builders::cube(MinkowskiNorm::euclidean())),
        ("octa", builders::octahedron()),
        ("torus", builders::flat_torus()),
        ("quartic cube", quartic_cube()),
    ];
    let mut worst = 0.0f64;
    let mut edges = 0;
    for (name, s) in &surfaces {
        let r = classify::gauss_bonnet_check(s, GaussBonnetOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        worst = worst.max(r.max_adjacent_residual);
        edges += r.adjacent.len();
    }
    ensure(worst <= 1e-6, || format!("adjacent-vertex residual {worst:.3e}"))?;
    Ok(format!("{edges} glued edges, worst residual {worst:.1e}"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("1 regge agreement", regge, 10),
        ("2 gauss-bonnet euclidean", gauss_bonnet_euclidean, 20),
        ("3 gauss-bonnet berwald", gauss_bonnet_berwald, 30),
        ("4 snell closed form", snell, 1),
        ("5 convexity and monotonicity", convexity_and_tracing, 60),
        ("6 finite crossing and scale invariance", finite_crossing, 60),
        ("7 extension criterion", extension_criterion, 10),
        ("8 landsberg invariance and mutation", landsberg_invariance, 60),
        ("9 adjacent-vertex identity", adjacent_vertices, 30),
    ];
    let mut failed = Vec::new();
    for (name, run, limit) in criteria {
        let t0 = Instant::now();
        let mut outcome = run();
        let dt = t0.elapsed();
        if outcome.is_ok() && dt > Duration::from_secs(limit) {
            outcome = Err(format!("took {:.1} s, limit {limit} s", dt.as_secs_f64()));
        }
        match &outcome {
            Ok(msg) => println!("PASS  {name}: {msg} ({:.2} s)", dt.as_secs_f64()),
            Err(msg) => {
                println!("FAIL  {name}: {msg} ({:.2} s)", dt.as_secs_f64());
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
