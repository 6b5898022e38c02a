//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a check fails or the input does not
//! parse, 2 on usage and IO errors. With `--format json` (the default) errors
//! are reported on stderr as `{"error": {"kind", "message", ...}}`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pflat_core::classify::{self, ClassifyError, GaussBonnetOptions, Thresholds};
use pflat_core::cone::{self, DirSign};
use pflat_core::geodesic::{self, DirectedPoint, TraceError, TraceLimits};
use pflat_core::surface::EDGE_COMPAT_TOL;
use pflat_core::{Surface, Vec2};
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::format::{self, ParseError, Parsed};
use crate::{report, svg};

/// Samples per check when `--samples` is not given.
pub const DEFAULT_VALIDATE_SAMPLES: usize = 64;
pub const DEFAULT_EDGE_SAMPLES: usize = 64;
pub const DEFAULT_DIRECTIONS: usize = 8;
/// Sampling phase without `--seed`: base directions at sector-angle midpoints.
pub const DEFAULT_PHASE: f64 = 0.5;
/// Largest `|ΣK − θχ|` accepted by `gauss-bonnet`.
pub const GAUSS_BONNET_TOL: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "pflat", version, about = "Geodesics, curvature and Gauss-Bonnet on piecewise flat Finsler surfaces")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
}

#[derive(Args, Debug)]
pub struct GlobalOpts {
    /// Relative edge-compatibility tolerance.
    #[arg(long, global = true, default_value_t = EDGE_COMPAT_TOL)]
    pub tol: f64,
    /// Sample count: validation directions (64), edge-map samples (64) or
    /// curvature base directions (8).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Draws the curvature sampling phase; without it base directions sit at
    /// the midpoints of equal angle slices.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 1000)]
    pub max_crossings: usize,
    /// Relative distance along an edge within which a trace hits a vertex.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub vertex_tol: f64,
    /// Reject unknown keys in the surface file.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Run Gauss-Bonnet on surfaces whose faces disagree on θ.
    #[arg(long, global = true)]
    pub force: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct TraceArgs {
    /// Triangle id of the start face.
    #[arg(long)]
    pub face: i64,
    /// Start point `x,y` in the face chart.
    #[arg(long, value_parser = parse_vec2, allow_hyphen_values = true)]
    pub start: Vec2,
    /// Direction `x,y`; rescaled to unit length in the face norm.
    #[arg(long, value_parser = parse_vec2, allow_hyphen_values = true)]
    pub dir: Vec2,
    #[arg(long, default_value_t = f64::INFINITY)]
    pub max_length: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Incoming,
    Outgoing,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Norm, schema, edge-compatibility and topology checks.
    Validate { input: PathBuf },
    /// Traces a geodesic from a point and direction.
    Trace {
        input: PathBuf,
        #[command(flatten)]
        args: TraceArgs,
    },
    /// Vertex curvature over sampled base directions.
    Curvature {
        input: PathBuf,
        /// Vertex label; all interior vertices when omitted.
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Continuations of radial geodesics through a vertex.
    Extensions {
        input: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long, value_enum, default_value_t = SignArg::Incoming)]
        sign: SignArg,
    },
    /// Landsberg defect of every glued edge.
    CheckLandsberg {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
    },
    /// Linear fit of the crossing map of every glued edge.
    CheckBerwald {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        threshold: f64,
    },
    /// Compares the total curvature with θ·χ.
    GaussBonnet {
        input: PathBuf,
        #[arg(long, default_value_t = GAUSS_BONNET_TOL)]
        threshold: f64,
        /// Largest accepted spread of per-face indicatrix lengths.
        #[arg(long, default_value_t = 1e-7)]
        theta_tol: f64,
    },
    /// Shortest path between two points of a vertex's tangent cone.
    ConeDistance {
        input: PathBuf,
        #[arg(long)]
        vertex: String,
        /// `FACE:x,y` in the chart of triangle FACE.
        #[arg(long, value_parser = parse_face_point, allow_hyphen_values = true)]
        p: (i64, Vec2),
        #[arg(long, value_parser = parse_face_point, allow_hyphen_values = true)]
        q: (i64, Vec2),
    },
    /// Full report as JSON, or the unfolded strip of a trace as SVG.
    Export {
        input: PathBuf,
        #[arg(long)]
        face: Option<i64>,
        #[arg(long, value_parser = parse_vec2, allow_hyphen_values = true)]
        start: Option<Vec2>,
        #[arg(long, value_parser = parse_vec2, allow_hyphen_values = true)]
        dir: Option<Vec2>,
        #[arg(long, default_value_t = f64::INFINITY)]
        max_length: f64,
    },
}

fn parse_vec2(s: &str) -> Result<Vec2, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    let p = |t: &str| -> Result<f64, String> {
        let v: f64 = t.trim().parse().map_err(|e| format!("{t:?}: {e}"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("{t:?} is not finite"))
        }
    };
    Ok(Vec2::new(p(x)?, p(y)?))
}

fn parse_face_point(s: &str) -> Result<(i64, Vec2), String> {
    let (f, xy) = s.split_once(':').ok_or_else(|| format!("expected FACE:x,y, got {s:?}"))?;
    let face = f.trim().parse().map_err(|e| format!("{f:?}: {e}"))?;
    Ok((face, parse_vec2(xy)?))
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub code: i32,
    pub extra: Value,
}

impl CliError {
    fn new(kind: &'static str, code: i32, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
            code,
            extra: json!({}),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self::new("usage", 2, message)
    }

    fn io(message: impl Into<String>) -> Self {
        Self::new("io", 2, message)
    }

    fn compute(message: impl std::fmt::Display) -> Self {
        Self::new("compute", 1, message.to_string())
    }

    pub fn to_json(&self) -> Value {
        let mut e = json!({"kind": self.kind, "message": self.message});
        if let (Some(e), Some(x)) = (e.as_object_mut(), self.extra.as_object()) {
            e.extend(x.clone());
        }
        json!({ "error": e })
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        let mut c = CliError::new("parse", 1, e.to_string());
        c.extra = match &e {
            ParseError::Syntax { line, column, .. } => json!({"line": line, "column": column}),
            ParseError::Schema { path, .. } | ParseError::UnknownKey { path } => json!({"path": path}),
            ParseError::Surface(_) => json!({}),
        };
        if matches!(e, ParseError::Surface(_)) {
            c.kind = "surface";
        }
        c
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Surface(_) | ClassifyError::Disconnected(_) => CliError::new("surface", 1, e.to_string()),
            ClassifyError::NotLandsberg { .. } => CliError::new("hypothesis", 1, e.to_string()),
            ClassifyError::InvalidArgument(_) => CliError::usage(e.to_string()),
            _ => CliError::compute(e),
        }
    }
}

/// What a command produced.
struct Output {
    body: String,
    /// Exit status 1 with output (a failed check).
    failed: bool,
    warnings: Vec<String>,
}

impl Output {
    fn json(v: &Value, failed: bool) -> Self {
        Output {
            body: report::render(v),
            failed,
            warnings: Vec::new(),
        }
    }
}

fn load(path: &PathBuf, strict: bool) -> Result<Parsed, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    Ok(format::parse_surface(&text, strict)?)
}

fn phase(seed: Option<u64>) -> f64 {
    match seed {
        Some(s) => rand_chacha::ChaCha8Rng::seed_from_u64(s).gen_range(0.05..0.95),
        None => DEFAULT_PHASE,
    }
}

fn vertex(surface: &Surface, label: &str) -> Result<usize, CliError> {
    surface.vertex_by_label(label).map_err(|e| CliError::usage(e.to_string()))
}

fn face(surface: &Surface, id: i64) -> Result<usize, CliError> {
    surface
        .face_index(id)
        .ok_or_else(|| CliError::usage(format!("no triangle with id {id}")))
}

fn run_trace(surface: &Surface, a: &TraceArgs, opts: &GlobalOpts) -> Result<geodesic::GeodesicPolyline, CliError> {
    let f = face(surface, a.face)?;
    let dir = surface
        .norm_of(f)
        .unitize(a.dir)
        .map_err(|e| CliError::usage(format!("--dir: {e}")))?;
    if a.max_length.is_nan() || a.max_length <= 0.0 {
        return Err(CliError::usage("--max-length must be positive"));
    }
    let limits = TraceLimits {
        max_length: a.max_length,
        max_crossings: opts.max_crossings,
        vertex_tol: opts.vertex_tol,
    };
    geodesic::trace(surface, DirectedPoint { face: f, pos: a.start, dir }, limits).map_err(|e| match e {
        TraceError::InvalidStart(_) | TraceError::VertexHit { .. } | TraceError::Boundary { .. } => {
            CliError::usage(format!("--start: {e}"))
        }
        TraceError::Cross(_) => CliError::compute(e),
    })
}

fn curvature_rows(t: &classify::CurvatureTable) -> Value {
    Value::Array(t.vertices.iter().map(report::vertex_curvature).collect())
}

/// Maps a face-chart point to the sector of `v`'s cone at the nearest
/// corner of that face lying on `v`.
fn cone_point(surface: &Surface, c: &cone::TangentCone, (id, p): (i64, Vec2)) -> Result<(usize, Vec2), CliError> {
    let f = face(surface, id)?;
    let t = surface.triangle(f);
    (0..c.len())
        .filter(|&k| c.sectors[k].corner.is_some_and(|(cf, _)| cf == f))
        .map(|k| {
            let corner = c.sectors[k].corner.unwrap().1;
            (k, p - t.chart[corner])
        })
        .min_by(|x, y| x.1.length().total_cmp(&y.1.length()))
        .ok_or_else(|| CliError::usage(format!("triangle {id} has no corner at vertex {}", c.label)))
}

fn execute(cmd: &Command, opts: &GlobalOpts) -> Result<Output, CliError> {
    let svg_ok = matches!(cmd, Command::Trace { .. } | Command::Export { .. });
    if opts.format == Format::Svg && !svg_ok {
        return Err(CliError::usage("--format svg is only available for trace and export"));
    }
    if [opts.tol, opts.vertex_tol].iter().any(|t| t.is_nan() || *t < 0.0) {
        return Err(CliError::usage("tolerances must be non-negative"));
    }
    if opts.samples == Some(0) {
        return Err(CliError::usage("--samples must be positive"));
    }
    let input = match cmd {
        Command::Validate { input }
        | Command::Trace { input, .. }
        | Command::Curvature { input, .. }
        | Command::Extensions { input, .. }
        | Command::CheckLandsberg { input, .. }
        | Command::CheckBerwald { input, .. }
        | Command::GaussBonnet { input, .. }
        | Command::ConeDistance { input, .. }
        | Command::Export { input, .. } => input,
    };
    let Parsed { surface: s, warnings } = load(input, opts.strict)?;
    let phase = phase(opts.seed);
    let mut out = match cmd {
        Command::Validate { .. } => {
            let r = s.validate_with(opts.samples.unwrap_or(DEFAULT_VALIDATE_SAMPLES), opts.tol);
            return Ok(Output::json(&report::validation(&s, &r, &warnings), !r.passed()));
        }
        Command::Trace { args, .. } => {
            let line = run_trace(&s, args, opts)?;
            match opts.format {
                Format::Json => Output::json(&report::polyline(&s, &line), false),
                Format::Svg => Output {
                    body: svg::render(&s, &line),
                    failed: false,
                    warnings: Vec::new(),
                },
            }
        }
        Command::Curvature { vertex: label, .. } => {
            let n = opts.samples.unwrap_or(DEFAULT_DIRECTIONS);
            let (rows, skipped) = match label {
                Some(l) => {
                    let v = vertex(&s, l)?;
                    let c = classify::vertex_curvature_at(&s, v, n, phase)?;
                    (json!([report::vertex_curvature(&c)]), Vec::new())
                }
                None => {
                    let t = classify::curvature_table_at(&s, n, phase)?;
                    (curvature_rows(&t), t.skipped)
                }
            };
            Output::json(
                &json!({"curvature": rows, "skipped": skipped, "directions": n, "phase": report::num(phase)}),
                false,
            )
        }
        Command::Extensions { vertex: label, sign, .. } => {
            let v = vertex(&s, label)?;
            let c = cone::build_cone(&s, v).map_err(CliError::compute)?;
            let sign = match sign {
                SignArg::Incoming => DirSign::Incoming,
                SignArg::Outgoing => DirSign::Outgoing,
            };
            let n = opts.samples.unwrap_or(DEFAULT_DIRECTIONS);
            let rows = c
                .sample_directions_at(n, sign, phase)
                .into_iter()
                .map(|d| cone::extension_set(&c, d).map(|e| report::extension(&e)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(CliError::compute)?;
            Output::json(
                &json!({
                    "vertex": c.label,
                    "sign": report::sign(sign),
                    "l_plus": report::num(cone::total_indicatrix_length(&c, DirSign::Outgoing)),
                    "l_minus": report::num(cone::total_indicatrix_length(&c, DirSign::Incoming)),
                    "extensions": rows,
                }),
                false,
            )
        }
        Command::CheckLandsberg { threshold, .. } => {
            let n = opts.samples.unwrap_or(DEFAULT_EDGE_SAMPLES);
            let edges = classify::landsberg_all(&s, n)?;
            let max = edges.iter().map(|e| e.value).fold(0.0, f64::max);
            let ok = edges.iter().all(|e| e.value <= *threshold);
            Output::json(
                &json!({
                    "landsberg": report::landsberg(&edges),
                    "max_defect": report::num(max),
                    "threshold": report::num(*threshold),
                    "is_landsberg": ok,
                    "theta": report::theta(&classify::theta_m(&s)),
                }),
                !ok,
            )
        }
        Command::CheckBerwald { threshold, .. } => {
            let n = opts.samples.unwrap_or(DEFAULT_EDGE_SAMPLES);
            let edges = classify::berwald_all(&s, n, *threshold)?;
            let mismatch = Thresholds::default().landsberg;
            let ok = edges
                .iter()
                .all(|e| e.edge.value <= *threshold && e.norm_mismatch.is_some_and(|m| m <= mismatch));
            Output::json(
                &json!({
                    "berwald": report::berwald(&edges),
                    "threshold": report::num(*threshold),
                    "norm_mismatch_threshold": report::num(mismatch),
                    "is_berwald": ok,
                }),
                !ok,
            )
        }
        Command::GaussBonnet { threshold, theta_tol, .. } => {
            let o = GaussBonnetOptions {
                directions: opts.samples.unwrap_or(DEFAULT_DIRECTIONS),
                thresholds: Thresholds {
                    theta: *theta_tol,
                    ..Thresholds::default()
                },
                force: opts.force,
                phase,
            };
            let r = classify::gauss_bonnet_check(&s, o)?;
            let passed = r.residual <= *threshold;
            let mut gb = report::gauss_bonnet(&r);
            gb["passed"] = json!(passed);
            gb["threshold"] = report::num(*threshold);
            Output::json(
                &json!({"gauss_bonnet": gb, "curvature": curvature_rows(&r.curvature)}),
                !passed && !r.hypothesis_violated,
            )
        }
        Command::ConeDistance { vertex: label, p, q, .. } => {
            let v = vertex(&s, label)?;
            let c = cone::build_cone(&s, v).map_err(CliError::compute)?;
            let (sp, pp) = cone_point(&s, &c, *p)?;
            let (sq, qq) = cone_point(&s, &c, *q)?;
            let path = cone::cone_two_point_geodesic(&c, sp, pp, sq, qq).map_err(|e| match e {
                cone::ConeError::Apex | cone::ConeError::InvalidArgument(_) => CliError::usage(e.to_string()),
                e => CliError::compute(e),
            })?;
            let points: Vec<(usize, i64, Vec2)> = path
                .points
                .iter()
                .map(|&(k, x)| {
                    let (f, corner) = c.sectors[k].corner.expect("cone built from a surface");
                    let t = s.triangle(f);
                    (k, t.id, x + t.chart[corner])
                })
                .collect();
            let mut v = report::cone_path(&path, &points);
            v["vertex"] = json!(c.label);
            Output::json(&v, false)
        }
        Command::Export {
            face: f,
            start,
            dir,
            max_length,
            ..
        } => {
            let trace = match (f, start, dir) {
                (Some(face), Some(start), Some(dir)) => Some(TraceArgs {
                    face: *face,
                    start: *start,
                    dir: *dir,
                    max_length: *max_length,
                }),
                (None, None, None) => None,
                _ => return Err(CliError::usage("--face, --start and --dir go together")),
            };
            if opts.format == Format::Svg {
                let a = trace.ok_or_else(|| CliError::usage("svg export needs --face, --start and --dir"))?;
                let line = run_trace(&s, &a, opts)?;
                Output {
                    body: svg::render(&s, &line),
                    failed: false,
                    warnings: Vec::new(),
                }
            } else {
                let mut v = full_report(&s, opts, phase)?;
                if let Some(a) = trace {
                    v["trace"] = report::polyline(&s, &run_trace(&s, &a, opts)?);
                }
                Output::json(&v, false)
            }
        }
    };
    out.warnings = warnings;
    Ok(out)
}

/// Classification, curvature table and Gauss-Bonnet in one document.
fn full_report(s: &Surface, opts: &GlobalOpts, phase: f64) -> Result<Value, CliError> {
    let n = opts.samples.unwrap_or(DEFAULT_EDGE_SAMPLES);
    let c = classify::classify(s, n, Thresholds::default())?;
    let mut v = report::classification(&c);
    let dirs = opts.samples.unwrap_or(DEFAULT_DIRECTIONS);
    let gb = GaussBonnetOptions {
        directions: dirs,
        force: opts.force,
        phase,
        ..Default::default()
    };
    match classify::gauss_bonnet_check(s, gb) {
        Ok(r) => {
            v["gauss_bonnet"] = report::gauss_bonnet(&r);
            v["curvature"] = curvature_rows(&r.curvature);
        }
        Err(e) => {
            v["gauss_bonnet"] = Value::Null;
            v["gauss_bonnet_error"] = json!(e.to_string());
            v["curvature"] = match classify::curvature_table_at(s, dirs, phase) {
                Ok(t) => curvature_rows(&t),
                Err(_) => json!([]),
            };
        }
    }
    v["surface"] = json!({
        "faces": s.face_count(),
        "edges": s.edge_count(),
        "vertices": s.vertices().len(),
        "closed": s.is_closed(),
        "euler_characteristic": s.euler_characteristic(),
    });
    v["phase"] = report::num(phase);
    Ok(v)
}

fn report_error(e: &CliError, json_errors: bool, stderr: &mut dyn Write) {
    let _ = if json_errors {
        stderr.write_all(report::render(&e.to_json()).as_bytes())
    } else {
        writeln!(stderr, "error: {}", e.message)
    };
}

/// Parses `args` (program name first) and runs the command; returns the
/// exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            if matches!(e.kind(), ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = write!(stderr, "{e}");
                return 2;
            }
            let svg = args.windows(2).any(|w| w[0] == "--format" && w[1] == "svg") || args.iter().any(|a| a == "--format=svg");
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            let err = CliError::usage(first.strip_prefix("error: ").unwrap_or(first));
            if svg {
                let _ = write!(stderr, "{e}");
            } else {
                report_error(&err, true, stderr);
            }
            return 2;
        }
    };
    let json_errors = cli.opts.format == Format::Json;
    match execute(&cli.command, &cli.opts) {
        Ok(out) => {
            for w in &out.warnings {
                let _ = if json_errors {
                    stderr.write_all(report::render(&json!({ "warning": w })).as_bytes())
                } else {
                    writeln!(stderr, "warning: {w}")
                };
            }
            let written = match &cli.opts.out {
                Some(p) => std::fs::write(p, &out.body).map_err(|e| CliError::io(format!("{}: {e}", p.display()))),
                None => stdout.write_all(out.body.as_bytes()).map_err(|e| CliError::io(e.to_string())),
            };
            match written {
                Ok(()) => i32::from(out.failed),
                Err(e) => {
                    report_error(&e, json_errors, stderr);
                    e.code
                }
            }
        }
        Err(e) => {
            report_error(&e, json_errors, stderr);
            e.code
        }
    }
}
