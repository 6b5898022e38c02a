use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }

    fn error(&self) -> Value {
        let v: Value = serde_json::from_str(&self.stderr).unwrap_or_else(|e| panic!("{e}: {}", self.stderr));
        v["error"].clone()
    }
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = pflat::cli::run(std::iter::once("pflat").chain(args.iter().copied()), &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn f64_at(v: &Value, ptr: &str) -> f64 {
    v.pointer(ptr).and_then(Value::as_f64).unwrap_or_else(|| panic!("{ptr} in {v}"))
}

#[test]
fn validate_exit_codes() {
    let r = run(&["validate", &fixture("tetra.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["passed"], true);
    assert_eq!(r.json()["euler_characteristic"], 2);

    // scaled upper face: edge lengths disagree
    let r = run(&["validate", &fixture("snell.json")]);
    assert_eq!(r.code, 1);
    let checks = r.json()["checks"].as_array().unwrap().clone();
    let ec = checks.iter().find(|c| c["name"] == "edge-compatibility").unwrap();
    assert_eq!(ec["passed"], false);
    assert!((f64_at(ec, "/worst") - 0.5).abs() < 1e-12);

    // a loose tolerance lets it through
    assert_eq!(run(&["validate", &fixture("snell.json"), "--tol", "0.6"]).code, 0);
}

#[test]
fn gauss_bonnet_on_the_tetrahedron() {
    let r = run(&["gauss-bonnet", &fixture("tetra.json")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert!((f64_at(&v, "/gauss_bonnet/sum_K") - 12.566370614359).abs() <= 1e-6);
    assert!(f64_at(&v, "/gauss_bonnet/residual") <= 1e-6);
    assert_eq!(v["gauss_bonnet"]["chi"], 2);
    assert_eq!(v["curvature"].as_array().unwrap().len(), 4);
    for c in v["curvature"].as_array().unwrap() {
        assert!((f64_at(c, "/mean") - std::f64::consts::PI).abs() < 1e-9);
        assert_eq!(c["samples"].as_array().unwrap().len(), 8);
    }
}

#[test]
fn gauss_bonnet_refuses_mixed_theta_unless_forced() {
    let r = run(&["gauss-bonnet", &fixture("cube_mixed.json")]);
    assert_eq!(r.code, 1);
    assert_eq!(r.error()["kind"], "hypothesis");
    assert!(r.stdout.is_empty());

    let r = run(&["gauss-bonnet", &fixture("cube_mixed.json"), "--force"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["gauss_bonnet"]["hypothesis_violated"], true);
    assert!(f64_at(&v, "/gauss_bonnet/theta_deviation") > 1e-3);

    let r = run(&["gauss-bonnet", &fixture("triangle.json")]);
    assert_eq!(r.code, 1);
    assert_eq!(r.error()["kind"], "surface");
}

#[test]
fn gauss_bonnet_on_the_quartic_cube() {
    let r = run(&["gauss-bonnet", &fixture("cube_quartic.json"), "--samples", "4"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    let theta = pflat_core::MinkowskiNorm::quartic(0.5).unwrap().indicatrix_length();
    assert!((f64_at(&v, "/gauss_bonnet/theta_chi") - 2.0 * theta).abs() < 1e-9);
    assert!(f64_at(&v, "/gauss_bonnet/residual") <= 1e-6);
    assert!(f64_at(&v, "/gauss_bonnet/max_adjacent_residual") <= 1e-6);
}

#[test]
fn trace_refracts_at_the_snell_interface() {
    // 30 degrees from the normal in the lower face
    let (s, c) = (0.5f64, 3f64.sqrt() / 2.0);
    let dir = format!("{s},{c}");
    let r = run(&["trace", &fixture("snell.json"), "--face", "0", "--start", "0,-1", "--dir", &dir]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["crossings"], 1);
    let ev = &v["events"][0];
    let (ux, uy) = (f64_at(ev, "/u_out/0"), f64_at(ev, "/u_out/1"));
    let refracted = (ux / uy).atan();
    assert!((refracted - 0.25f64.asin()).abs() < 1e-9, "{refracted}");
    // the crossing point is where the incoming ray meets the edge
    assert!((f64_at(ev, "/point_from/0") - 1.0 / 3f64.sqrt()).abs() < 1e-10);
    assert_eq!(v["termination"]["kind"], "boundary");
    assert_eq!(v["segments"].as_array().unwrap().len(), 2);
}

#[test]
fn trace_usage_errors() {
    let t = fixture("tetra.json");
    let r = run(&["trace", &t, "--face", "9", "--start", "0.5,0.3", "--dir", "1,0"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.error()["kind"], "usage");
    let r = run(&["trace", &t, "--face", "0", "--start", "5,5", "--dir", "1,0"]);
    assert_eq!(r.code, 2);
    let r = run(&["trace", &t, "--face", "0", "--start", "0.5,0.3", "--dir", "0,0"]);
    assert_eq!(r.code, 2);
    let r = run(&["trace", &t, "--face", "0", "--start", "0.5;0.3", "--dir", "1,0"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.error()["kind"], "usage");
    let r = run(&["trace", &t, "--face", "0", "--start", "0.5,0.3", "--dir", "-1,-0.37", "--max-length", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!((f64_at(&r.json(), "/length") - 2.0).abs() < 1e-9);
    assert_eq!(r.json()["termination"]["kind"], "length-budget");
}

#[test]
fn trace_respects_the_crossing_cap() {
    let r = run(&[
        "trace",
        &fixture("torus.json"),
        "--face",
        "0",
        "--start",
        "0.6,0.2",
        "--dir",
        "1,0.318",
        "--max-crossings",
        "25",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["termination"]["kind"], "crossing-cap");
    assert_eq!(v["crossings"], 25);
}

#[test]
fn curvature_and_extensions() {
    let r = run(&["curvature", &fixture("octahedron.json"), "--vertex", "v0"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let c = &r.json()["curvature"][0];
    assert!((f64_at(c, "/mean") - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-7);

    let r = run(&["curvature", &fixture("triangle.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["skipped"].as_array().unwrap().len(), 3);

    let r = run(&["curvature", &fixture("tetra.json"), "--vertex", "nowhere"]);
    assert_eq!(r.code, 2);

    let r = run(&["extensions", &fixture("tetra.json"), "--vertex", "v0", "--samples", "5"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    let rows = v["extensions"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|e| e["kind"] == "none"));

    let r = run(&["extensions", &fixture("torus.json"), "--vertex", "v", "--sign", "outgoing"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert!(v["extensions"].as_array().unwrap().iter().all(|e| e["kind"] == "unique"));
    assert_eq!(v["sign"], "outgoing");
}

#[test]
fn landsberg_and_berwald_checks() {
    let r = run(&["check-landsberg", &fixture("cube_quartic.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["is_landsberg"], true);
    let r = run(&["check-berwald", &fixture("cube_quartic.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["is_berwald"], true);

    let r = run(&["check-landsberg", &fixture("randers_pair.json")]);
    assert_eq!(r.code, 1);
    assert!(f64_at(&r.json(), "/max_defect") > 1e-3);
    let r = run(&["check-berwald", &fixture("randers_pair.json")]);
    assert_eq!(r.code, 1);
    assert!(f64_at(&r.json(), "/berwald/0/residual") > 1e-3);

    // thresholds are reported and configurable
    let r = run(&["check-landsberg", &fixture("randers_pair.json"), "--threshold", "10"]);
    assert_eq!(r.code, 0);
    assert_eq!(f64_at(&r.json(), "/threshold"), 10.0);
}

#[test]
fn cone_distance_between_face_points() {
    // all three faces at v0 have their corner 0 there; unfolding gives the oracle
    let r = run(&["cone-distance", &fixture("tetra.json"), "--vertex", "v0", "--p", "0:0.3,0.1", "--q", "2:0.2,0.3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    let (p, q) = ((0.3f64, 0.1f64), (0.2f64, 0.3f64));
    let (rp, ap) = (p.0.hypot(p.1), p.1.atan2(p.0));
    let (rq, aq) = (q.0.hypot(q.1), q.1.atan2(q.0));
    // face 0's edge at 60 degrees is face 2's x-axis; the cone angle is pi
    let pi = std::f64::consts::PI;
    let one_way = (pi / 3.0 - ap) + aq;
    let sep = one_way.min(pi - one_way);
    let oracle = (rp * rp + rq * rq - 2.0 * rp * rq * sep.cos()).sqrt();
    assert!((f64_at(&v, "/length") - oracle).abs() < 1e-8, "{} vs {oracle}", v["length"]);
    assert!(v["candidates"].as_array().unwrap().len() >= 2);

    let r = run(&["cone-distance", &fixture("tetra.json"), "--vertex", "v3", "--p", "0:0.3,0.1", "--q", "2:0.2,0.3"]);
    assert_eq!(r.code, 2);
}

#[test]
fn export_report_schema() {
    let r = run(&["export", &fixture("torus.json"), "--samples", "16"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    for key in ["theta", "landsberg", "berwald", "curvature", "gauss_bonnet", "surface", "thresholds"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["is_berwald"], true);
    assert!(f64_at(&v, "/gauss_bonnet/sum_K").abs() < 1e-8);
    assert_eq!(v["gauss_bonnet"]["chi"], 0);
    assert!((f64_at(&v, "/theta/value") - 2.0 * std::f64::consts::PI).abs() < 1e-9);

    // open surfaces still export, without the identity
    let r = run(&["export", &fixture("square.json")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.json()["gauss_bonnet"].is_null());
    assert!(r.json()["gauss_bonnet_error"].is_string());
}

#[test]
fn svg_export() {
    let r = run(&[
        "export", &fixture("snell.json"), "--format", "svg", "--face", "0", "--start", "0,-1", "--dir", "0.5,0.8",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("<svg"));
    assert!(r.stdout.contains("schematic"));
    assert_eq!(r.stdout.matches("class=\"crossing\"").count(), 1);

    let r = run(&["trace", &fixture("tetra.json"), "--format", "svg", "--face", "0", "--start", "0.5,0.3", "--dir", "0.2,1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(!r.stdout.contains("schematic"));

    let r = run(&["export", &fixture("snell.json"), "--format", "svg"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.starts_with("error:"));
    let r = run(&["curvature", &fixture("tetra.json"), "--format", "svg"]);
    assert_eq!(r.code, 2);
}

#[test]
fn output_is_deterministic() {
    let cases: Vec<Vec<String>> = vec![
        vec!["gauss-bonnet".into(), fixture("cube_quartic.json"), "--seed".into(), "7".into(), "--samples".into(), "3".into()],
        vec!["export".into(), fixture("tetra.json"), "--seed".into(), "11".into()],
        vec!["trace".into(), fixture("snell.json"), "--face".into(), "0".into(), "--start".into(), "0,-1".into(), "--dir".into(), "0.3,1".into()],
    ];
    for args in cases {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let (x, y) = (run(&a), run(&a));
        assert_eq!(x.code, 0, "{}", x.stderr);
        assert_eq!(x.stdout, y.stdout);
    }
    // the seed moves the base directions
    let c = fixture("cube_quartic.json");
    let a = run(&["curvature", &c, "--seed", "1"]).json();
    let b = run(&["curvature", &c, "--seed", "2"]).json();
    assert_ne!(a["phase"], b["phase"]);
    assert_eq!(run(&["curvature", &c]).json()["phase"], 0.5);
}

#[test]
fn parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let tetra = std::fs::read_to_string(fixture("tetra.json")).unwrap();

    let bad = write("syntax.json", "{\n  \"norms\": [,\n}");
    let r = run(&["validate", &bad]);
    assert_eq!(r.code, 1);
    let e = r.error();
    assert_eq!(e["kind"], "parse");
    assert_eq!(e["line"], 2);
    assert!(e["column"].is_u64());

    let extra = write("extra.json", &tetra.replacen("\"reversed\"", "\"weight\": 1, \"reversed\"", 1));
    let r = run(&["validate", &extra]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["warnings"].as_array().unwrap().len(), 1);
    let r = run(&["validate", &extra, "--strict"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.error()["path"], "$.gluings[0].weight");

    let dangling = write("dangling.json", &tetra.replacen("\"norm\": \"e\"", "\"norm\": \"missing\"", 1));
    let r = run(&["validate", &dangling]);
    assert_eq!(r.code, 1);
    assert_eq!(r.error()["kind"], "surface");
    assert!(r.error()["message"].as_str().unwrap().contains("missing"));

    let r = run(&["validate", &dir.path().join("absent.json").to_string_lossy()]);
    assert_eq!(r.code, 2);
    assert_eq!(r.error()["kind"], "io");
}

#[test]
fn usage_errors_and_out_file() {
    let r = run(&["frobnicate"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.error()["kind"], "usage");
    assert_eq!(run(&["validate"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
    assert_eq!(run(&["validate", &fixture("tetra.json"), "--samples", "0"]).code, 2);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let r = run(&["validate", &fixture("tetra.json"), "--out", &out.to_string_lossy()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    let r = run(&["validate", &fixture("tetra.json"), "--out", &dir.path().join("no/such/dir.json").to_string_lossy()]);
    assert_eq!(r.code, 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_pflat");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(code(&["validate", &fixture("tetra.json")]), Some(0));
    assert_eq!(code(&["validate", &fixture("snell.json")]), Some(1));
    assert_eq!(code(&["validate"]), Some(2));
    let out = Command::new(bin).args(["check-landsberg", &fixture("cube_quartic.json")]).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["is_landsberg"], true);
}

#[test]
fn round_trip_through_files() {
    for name in ["tetra.json", "snell.json", "cube_quartic.json", "randers_pair.json", "torus.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let parsed = pflat::parse_surface(&text, true).unwrap();
        assert_eq!(pflat::serialize_surface(&parsed.surface).unwrap(), text, "{name}");
    }
}
