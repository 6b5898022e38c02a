//! Landsberg and Berwald measurements, the indicatrix constant `θ` and the
//! combinatorial Gauss-Bonnet check.
//!
//! Across a glued edge the crossing equation pairs every direction leaving
//! one face with a direction entering the other. A surface is Landsberg when
//! that pairing is an isometry of the Hessian metrics on the indicatrices,
//! and Berwald when it is the restriction of a linear map. Both are measured
//! numerically and compared with thresholds that travel with the verdicts.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::cone::{self, ConeError, DirSign};
use crate::geodesic::{crossing_direction, edge_pairing, CrossError};
use crate::math::{self, PI};
use crate::minkowski::MinkowskiNorm;
use crate::surface::{Surface, SurfaceError};
use crate::vec2::{Mat2, Vec2};

/// Step of the central differences taken along the crossing map, in radians.
pub const SPEED_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    /// Largest Landsberg defect accepted as Landsberg.
    pub landsberg: f64,
    /// Largest Berwald residual accepted as Berwald.
    pub berwald: f64,
    /// Largest spread of per-face indicatrix lengths accepted by Gauss-Bonnet.
    pub theta: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            landsberg: 1e-6,
            berwald: 1e-8,
            theta: 1e-7,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ClassifyError {
    Surface(SurfaceError),
    Cone(ConeError),
    Cross(CrossError),
    InvalidArgument(&'static str),
    /// The surface has more than one connected component.
    Disconnected(usize),
    /// Per-face indicatrix lengths differ by more than the threshold.
    NotLandsberg { deviation: f64, threshold: f64 },
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::Surface(e) => write!(f, "{e}"),
            ClassifyError::Cone(e) => write!(f, "{e}"),
            ClassifyError::Cross(e) => write!(f, "{e}"),
            ClassifyError::InvalidArgument(w) => write!(f, "invalid argument: {w}"),
            ClassifyError::Disconnected(n) => write!(f, "surface has {n} components"),
            ClassifyError::NotLandsberg { deviation, threshold } => write!(
                f,
                "indicatrix lengths deviate by {deviation:.3e} (threshold {threshold:.1e}); the surface is not Landsberg"
            ),
        }
    }
}

impl core::error::Error for ClassifyError {}

impl From<SurfaceError> for ClassifyError {
    fn from(e: SurfaceError) -> Self {
        ClassifyError::Surface(e)
    }
}

impl From<ConeError> for ClassifyError {
    fn from(e: ConeError) -> Self {
        ClassifyError::Cone(e)
    }
}

impl From<CrossError> for ClassifyError {
    fn from(e: CrossError) -> Self {
        ClassifyError::Cross(e)
    }
}

/// One sample of the crossing map of a glued edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeMapSample {
    pub gluing: usize,
    /// Euclidean angle of `u_in` from the edge vector in the first face's chart.
    pub phi: f64,
    /// Unit direction leaving the first face.
    pub u_in: Vec2,
    /// Matching unit direction entering the second face.
    pub u_out: Vec2,
    /// Hessian speeds of `u_in` and `u_out` with respect to `phi`.
    pub speed_in: f64,
    pub speed_out: f64,
    /// Crossing-equation residual.
    pub residual: f64,
}

impl EdgeMapSample {
    /// Speed of `u_out` per unit Hessian arc length of `u_in`.
    pub fn speed(&self) -> f64 {
        self.speed_out / self.speed_in
    }
}

struct EdgeMap<'a> {
    fa: &'a MinkowskiNorm,
    fb: &'a MinkowskiNorm,
    ea: Vec2,
    eb: Vec2,
    out_a: f64,
    in_b: f64,
}

impl<'a> EdgeMap<'a> {
    fn new(surface: &'a Surface, gluing: usize) -> Result<Self, ClassifyError> {
        if gluing >= surface.gluings().len() {
            return Err(ClassifyError::InvalidArgument("gluing index out of range"));
        }
        let ((fa, ea_i), (fb, eb_i)) = surface.gluing_sides(gluing);
        let (ea, eb) = surface
            .matched_edge_vectors(fa, ea_i)
            .ok_or(ClassifyError::InvalidArgument("boundary edge"))?;
        let ta = surface.triangle(fa);
        let tb = surface.triangle(fb);
        let in_a = ea.cross(ta.chart[(ea_i + 2) % 3] - ta.chart[ea_i]);
        let in_b = eb.cross(tb.chart[(eb_i + 2) % 3] - tb.chart[eb_i]);
        Ok(EdgeMap {
            fa: surface.norm_of(fa),
            fb: surface.norm_of(fb),
            ea,
            eb,
            out_a: -in_a.signum(),
            in_b: in_b.signum(),
        })
    }

    fn u_in(&self, phi: f64) -> Vec2 {
        let w = self.ea.normalized().rotated(self.out_a * phi);
        w / self.fa.eval(w)
    }

    fn map(&self, phi: f64) -> Result<(Vec2, Vec2, f64), CrossError> {
        let u = self.u_in(phi);
        let target = edge_pairing(self.fa, u, self.ea);
        let v = crossing_direction(self.fb, self.eb, self.in_b, target)?;
        Ok((u, v, math::abs(edge_pairing(self.fb, v, self.eb) - target)))
    }

    fn sample(&self, gluing: usize, phi: f64) -> Result<EdgeMapSample, ClassifyError> {
        let h = SPEED_STEP;
        let (u, v, residual) = self.map(phi)?;
        let (u0, v0, _) = self.map(phi - h)?;
        let (u1, v1, _) = self.map(phi + h)?;
        let du = (u1 - u0) / (2.0 * h);
        let dv = (v1 - v0) / (2.0 * h);
        Ok(EdgeMapSample {
            gluing,
            phi,
            u_in: u,
            u_out: v,
            speed_in: self.fa.hessian(u).map_err(|_| ClassifyError::InvalidArgument("bad norm"))?.length(du),
            speed_out: self.fb.hessian(v).map_err(|_| ClassifyError::InvalidArgument("bad norm"))?.length(dv),
            residual,
        })
    }
}

fn sample_angles(samples: usize) -> impl Iterator<Item = f64> {
    (0..samples).map(move |j| PI * (j as f64 + 0.5) / samples as f64)
}

/// Samples of the crossing map of `gluing` at Euclidean angles
/// `π(j + ½)/samples` from the edge.
pub fn edge_map_samples(surface: &Surface, gluing: usize, samples: usize) -> Result<Vec<EdgeMapSample>, ClassifyError> {
    let m = EdgeMap::new(surface, gluing)?;
    sample_angles(samples).map(|phi| m.sample(gluing, phi)).collect()
}

/// Largest `|speed − 1|` of the crossing map of `gluing`, where speed is the
/// Hessian length element of the outgoing direction per unit Hessian arc
/// length of the incoming one.
pub fn landsberg_defect(surface: &Surface, gluing: usize, samples: usize) -> Result<f64, ClassifyError> {
    if samples < 16 {
        return Err(ClassifyError::InvalidArgument("landsberg_defect needs at least 16 samples"));
    }
    Ok(edge_map_samples(surface, gluing, samples)?
        .iter()
        .map(|s| math::abs(s.speed() - 1.0))
        .fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BerwaldFit {
    /// Least-squares linear map taking incoming to outgoing directions.
    pub matrix: Mat2,
    /// RMS of `|A·u_in − u_out|`.
    pub residual: f64,
    /// Largest `|F₂(A·y) − F₁(y)|` over the samples; only measured when the
    /// residual passes the threshold.
    pub norm_mismatch: Option<f64>,
}

/// Fits one linear map to the crossing map of `gluing`.
pub fn berwald_residual(surface: &Surface, gluing: usize, samples: usize, threshold: f64) -> Result<BerwaldFit, ClassifyError> {
    if samples < 8 {
        return Err(ClassifyError::InvalidArgument("berwald_residual needs at least 8 samples"));
    }
    let m = EdgeMap::new(surface, gluing)?;
    let pairs: Vec<(Vec2, Vec2)> = sample_angles(samples)
        .map(|phi| m.map(phi).map(|(u, v, _)| (u, v)))
        .collect::<Result<_, _>>()?;
    let mut vu = Mat2::new(0.0, 0.0, 0.0, 0.0);
    let mut uu = Mat2::new(0.0, 0.0, 0.0, 0.0);
    for (u, v) in &pairs {
        vu = add(vu, outer(*v, *u));
        uu = add(uu, outer(*u, *u));
    }
    let inv = uu.inverse().ok_or(ClassifyError::InvalidArgument("degenerate samples"))?;
    let a = vu.mul_mat(&inv);
    let sq: f64 = pairs.iter().map(|(u, v)| { let d = a.apply(*u) - *v; d.dot(d) }).sum();
    let residual = math::sqrt(sq / pairs.len() as f64);
    let norm_mismatch = (residual <= threshold).then(|| {
        pairs
            .iter()
            .map(|(u, _)| math::abs(m.fb.eval(a.apply(*u)) - m.fa.eval(*u)))
            .fold(0.0, f64::max)
    });
    Ok(BerwaldFit {
        matrix: a,
        residual,
        norm_mismatch,
    })
}

fn outer(x: Vec2, y: Vec2) -> Mat2 {
    Mat2::new(x.x * y.x, x.x * y.y, x.y * y.x, x.y * y.y)
}

fn add(p: Mat2, q: Mat2) -> Mat2 {
    Mat2::new(
        p.m[0][0] + q.m[0][0],
        p.m[0][1] + q.m[0][1],
        p.m[1][0] + q.m[1][0],
        p.m[1][1] + q.m[1][1],
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaComponent {
    pub faces: Vec<usize>,
    /// Mean of the per-face indicatrix lengths.
    pub value: f64,
    /// Largest `|face length − value|`.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaReport {
    pub components: Vec<ThetaComponent>,
}

impl ThetaReport {
    /// Value and deviation of a connected surface.
    pub fn single(&self) -> Option<(f64, f64)> {
        match self.components.as_slice() {
            [c] => Some((c.value, c.deviation)),
            _ => None,
        }
    }
}

/// Per-face indicatrix lengths, summarized per connected component.
pub fn theta_m(surface: &Surface) -> ThetaReport {
    let lengths: Vec<f64> = surface.norms().iter().map(|(_, n)| n.indicatrix_length()).collect();
    let components = surface
        .components()
        .into_iter()
        .map(|faces| {
            let vals: Vec<f64> = faces.iter().map(|&f| lengths[surface.norm_index(f)]).collect();
            let value = vals.iter().sum::<f64>() / vals.len() as f64;
            let deviation = vals.iter().map(|v| math::abs(v - value)).fold(0.0, f64::max);
            ThetaComponent { faces, value, deviation }
        })
        .collect();
    ThetaReport { components }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexCurvature {
    pub vertex: usize,
    pub label: String,
    pub values: Vec<f64>,
    pub mean: f64,
    pub stddev: f64,
    pub l_plus: f64,
    pub l_minus: f64,
    pub non_generic: bool,
    pub wraps: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTable {
    pub vertices: Vec<VertexCurvature>,
    /// Labels of boundary vertices that were skipped.
    pub skipped: Vec<String>,
}

/// Curvature of one vertex over `directions` incoming base directions.
pub fn vertex_curvature(surface: &Surface, vertex: usize, directions: usize) -> Result<VertexCurvature, ClassifyError> {
    vertex_curvature_at(surface, vertex, directions, 0.5)
}

/// [`vertex_curvature`] with base directions at cumulative-angle offsets
/// `(j + phase) / directions`.
pub fn vertex_curvature_at(
    surface: &Surface,
    vertex: usize,
    directions: usize,
    phase: f64,
) -> Result<VertexCurvature, ClassifyError> {
    if !(0.0..1.0).contains(&phase) {
        return Err(ClassifyError::InvalidArgument("phase must lie in [0, 1)"));
    }
    if directions == 0 {
        return Err(ClassifyError::InvalidArgument("need at least one direction"));
    }
    let c = cone::build_cone(surface, vertex)?;
    let l_plus = cone::total_indicatrix_length(&c, DirSign::Outgoing);
    let l_minus = cone::total_indicatrix_length(&c, DirSign::Incoming);
    let mut values = Vec::with_capacity(directions);
    let (mut non_generic, mut wraps) = (false, false);
    for v in c.sample_directions_at(directions, DirSign::Incoming, phase) {
        let k = cone::curvature(&c, v)?;
        non_generic |= k.non_generic;
        wraps |= k.wraps;
        values.push(k.k);
    }
    let (mean, stddev) = mean_std(&values);
    Ok(VertexCurvature {
        vertex,
        label: c.label,
        values,
        mean,
        stddev,
        l_plus,
        l_minus,
        non_generic,
        wraps,
    })
}

/// Curvature of every interior vertex; boundary vertices are skipped.
pub fn curvature_table(surface: &Surface, directions: usize) -> Result<CurvatureTable, ClassifyError> {
    curvature_table_at(surface, directions, 0.5)
}

/// [`curvature_table`] with a sampling phase (see [`vertex_curvature_at`]).
pub fn curvature_table_at(surface: &Surface, directions: usize, phase: f64) -> Result<CurvatureTable, ClassifyError> {
    let mut vertices = Vec::new();
    let mut skipped = Vec::new();
    for (i, v) in surface.vertices().iter().enumerate() {
        if v.boundary {
            skipped.push(v.label.clone());
            continue;
        }
        vertices.push(vertex_curvature_at(surface, i, directions, phase)?);
    }
    Ok(CurvatureTable { vertices, skipped })
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, math::sqrt(var))
}

/// Identity `K(z₁) + K(z₂) = 2θ − l⁺(z₁) − l⁺(z₂)` on the endpoints of one
/// glued edge.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjacentCheck {
    pub gluing: usize,
    pub z1: String,
    pub z2: String,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussBonnetReport {
    pub sum_k: f64,
    pub theta: f64,
    pub theta_deviation: f64,
    pub chi: i64,
    pub theta_chi: f64,
    pub residual: f64,
    /// Set when the indicatrix lengths disagree and the check ran anyway.
    pub hypothesis_violated: bool,
    pub adjacent: Vec<AdjacentCheck>,
    pub max_adjacent_residual: f64,
    pub curvature: CurvatureTable,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussBonnetOptions {
    pub directions: usize,
    pub thresholds: Thresholds,
    /// Report both sides even when the surface is not Landsberg.
    pub force: bool,
    /// Sampling phase of the base directions, in `[0, 1)`.
    pub phase: f64,
}

impl Default for GaussBonnetOptions {
    fn default() -> Self {
        GaussBonnetOptions {
            directions: 8,
            thresholds: Thresholds::default(),
            force: false,
            phase: 0.5,
        }
    }
}

/// Compares `Σ K` with `θ·χ` on a closed connected surface.
pub fn gauss_bonnet_check(surface: &Surface, opts: GaussBonnetOptions) -> Result<GaussBonnetReport, ClassifyError> {
    surface.require_closed()?;
    let th = theta_m(surface);
    let (theta, theta_deviation) = th.single().ok_or(ClassifyError::Disconnected(th.components.len()))?;
    let violated = theta_deviation > opts.thresholds.theta;
    if violated && !opts.force {
        return Err(ClassifyError::NotLandsberg {
            deviation: theta_deviation,
            threshold: opts.thresholds.theta,
        });
    }
    let curvature = curvature_table_at(surface, opts.directions, opts.phase)?;
    let by_vertex: BTreeMap<usize, &VertexCurvature> = curvature.vertices.iter().map(|v| (v.vertex, v)).collect();
    let sum_k: f64 = curvature.vertices.iter().map(|v| v.mean).sum();
    let chi = surface.euler_characteristic();
    let theta_chi = theta * chi as f64;
    let mut adjacent = Vec::with_capacity(surface.gluings().len());
    for g in 0..surface.gluings().len() {
        let ((fa, ea), _) = surface.gluing_sides(g);
        let z1 = by_vertex[&surface.vertex_of_corner(fa, ea)];
        let z2 = by_vertex[&surface.vertex_of_corner(fa, (ea + 1) % 3)];
        let lhs = z1.mean + z2.mean;
        let rhs = 2.0 * theta - z1.l_plus - z2.l_plus;
        adjacent.push(AdjacentCheck {
            gluing: g,
            z1: z1.label.clone(),
            z2: z2.label.clone(),
            lhs,
            rhs,
            residual: math::abs(lhs - rhs),
        });
    }
    let max_adjacent_residual = adjacent.iter().map(|a| a.residual).fold(0.0, f64::max);
    Ok(GaussBonnetReport {
        sum_k,
        theta,
        theta_deviation,
        chi,
        theta_chi,
        residual: math::abs(sum_k - theta_chi),
        hypothesis_violated: violated,
        adjacent,
        max_adjacent_residual,
        curvature,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeMeasure {
    pub gluing: usize,
    /// `(triangle id, edge)` of both sides.
    pub a: (i64, usize),
    pub b: (i64, usize),
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BerwaldMeasure {
    pub edge: EdgeMeasure,
    pub matrix: Mat2,
    pub norm_mismatch: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub thresholds: Thresholds,
    pub landsberg: Vec<EdgeMeasure>,
    pub berwald: Vec<BerwaldMeasure>,
    pub is_landsberg: bool,
    pub is_berwald: bool,
    pub theta: ThetaReport,
}

fn edge_ids(surface: &Surface, g: usize) -> ((i64, usize), (i64, usize)) {
    let ((fa, ea), (fb, eb)) = surface.gluing_sides(g);
    ((surface.triangle(fa).id, ea), (surface.triangle(fb).id, eb))
}

/// Landsberg defects of every glued edge.
pub fn landsberg_all(surface: &Surface, samples: usize) -> Result<Vec<EdgeMeasure>, ClassifyError> {
    (0..surface.gluings().len())
        .map(|g| {
            let (a, b) = edge_ids(surface, g);
            Ok(EdgeMeasure {
                gluing: g,
                a,
                b,
                value: landsberg_defect(surface, g, samples)?,
            })
        })
        .collect()
}

/// Berwald fits of every glued edge.
pub fn berwald_all(surface: &Surface, samples: usize, threshold: f64) -> Result<Vec<BerwaldMeasure>, ClassifyError> {
    (0..surface.gluings().len())
        .map(|g| {
            let (a, b) = edge_ids(surface, g);
            let fit = berwald_residual(surface, g, samples, threshold)?;
            Ok(BerwaldMeasure {
                edge: EdgeMeasure {
                    gluing: g,
                    a,
                    b,
                    value: fit.residual,
                },
                matrix: fit.matrix,
                norm_mismatch: fit.norm_mismatch,
            })
        })
        .collect()
}

/// Every edge measure and the θ summary, with verdicts.
pub fn classify(surface: &Surface, samples: usize, thresholds: Thresholds) -> Result<ClassificationReport, ClassifyError> {
    let landsberg = landsberg_all(surface, samples)?;
    let berwald = berwald_all(surface, samples, thresholds.berwald)?;
    let is_landsberg = landsberg.iter().all(|e| e.value <= thresholds.landsberg);
    let is_berwald = berwald
        .iter()
        .all(|e| e.edge.value <= thresholds.berwald && e.norm_mismatch.is_some_and(|m| m <= thresholds.landsberg));
    Ok(ClassificationReport {
        thresholds,
        landsberg,
        berwald,
        is_landsberg,
        is_berwald,
        theta: theta_m(surface),
    })
}
