//! Tangent cones at vertices.
//!
//! The tangent cone at a vertex is the cyclic fan of its incident corners,
//! each extended to an infinite sector with the apex at the chart origin.
//! Sector `k` is bounded by the rays `a_k` and `b_k`; ray `b_k` is glued to
//! `a_{k+1}` so that `λ·b_k` and `λ·a_{k+1}` are the same point. Sectors
//! coming from triangle corners are convex.
//!
//! Angles are Hessian arc lengths on the indicatrix. The swept angle of a
//! curve that avoids the apex is the angle its radial direction turns
//! through; the curvature at a base direction is the total swept angle of
//! the two parallel perturbations of the radial geodesic, minus the length
//! of the whole indicatrix.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::geodesic::{self, crossing_direction, edge_pairing, CrossError, Strip, StripLink};
use crate::math::{self, PI};
use crate::minkowski::{IndicatrixArc, MinkowskiNorm};
use crate::surface::{Surface, SurfaceError};
use crate::validation::ValidationReport;
use crate::vec2::Vec2;
use crate::DIRECTION_TOL;

/// Default crossing cap for cone geodesics.
pub const CONE_CROSSING_CAP: usize = 10_000;
/// Base perturbation offset, relative to the Euclidean length of the base direction.
pub const PERTURBATION_EPS: f64 = 1e-3;
/// Rotation applied to a base direction whose perturbation ends parallel to an edge.
pub const GENERIC_NUDGE: f64 = 1e-7;
/// `|K|` below this counts as zero when classifying extensions.
pub const CURVATURE_ZERO_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum ConeError {
    Surface(SurfaceError),
    TooFewSectors(usize),
    DegenerateSector(usize),
    /// The start direction points along the ray through the apex.
    Radial,
    /// The point is the apex or the path runs into it.
    Apex,
    InvalidArgument(&'static str),
    Cross(CrossError),
}

impl fmt::Display for ConeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeError::Surface(e) => write!(f, "{e}"),
            ConeError::TooFewSectors(n) => write!(f, "a cone needs at least 3 sectors, got {n}"),
            ConeError::DegenerateSector(k) => write!(f, "sector {k} has parallel boundary rays"),
            ConeError::Radial => write!(f, "direction is radial"),
            ConeError::Apex => write!(f, "path meets the apex"),
            ConeError::InvalidArgument(w) => write!(f, "invalid argument: {w}"),
            ConeError::Cross(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ConeError {}

impl From<SurfaceError> for ConeError {
    fn from(e: SurfaceError) -> Self {
        ConeError::Surface(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sector {
    pub norm: MinkowskiNorm,
    /// Ray shared with the previous sector.
    pub a: Vec2,
    /// Ray shared with the next sector.
    pub b: Vec2,
    /// Originating `(face, corner)`, if built from a surface.
    pub corner: Option<(usize, usize)>,
}

impl Sector {
    /// `+1` when the sector turns counterclockwise from `a` to `b`.
    pub fn orientation(&self) -> f64 {
        if self.a.cross(self.b) >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Whether `r` lies in the closed sector (angular tolerance `tol`).
    pub fn contains(&self, r: Vec2, tol: f64) -> bool {
        let o = self.orientation();
        let rn = r.normalized();
        o * self.a.normalized().cross(rn) >= -tol && o * rn.cross(self.b.normalized()) >= -tol && rn.dot(self.a + self.b) > -tol
    }

    /// Euclidean opening angle.
    pub fn opening(&self) -> f64 {
        math::abs(self.a.angle_to(self.b))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangentCone {
    pub label: String,
    pub vertex: Option<usize>,
    pub sectors: Vec<Sector>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirSign {
    Incoming,
    Outgoing,
}

/// A unit direction at the apex. For an incoming direction `dir` is the
/// velocity of a geodesic arriving at the apex, so the geodesic runs along
/// the ray `-dir`; `sector` is the sector containing that ray. For an
/// outgoing direction the ray is `dir` itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeDirection {
    pub sector: usize,
    pub dir: Vec2,
    pub sign: DirSign,
}

impl ConeDirection {
    /// The radial ray occupied by the geodesic.
    pub fn ray(&self) -> Vec2 {
        match self.sign {
            DirSign::Incoming => -self.dir,
            DirSign::Outgoing => self.dir,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Which boundary ray of a sector was crossed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ray {
    A,
    B,
}

/// A straight piece of a cone geodesic in one sector. `None` endpoints are
/// at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConePiece {
    pub sector: usize,
    pub start: Option<Vec2>,
    pub end: Option<Vec2>,
    /// Unit velocity in the sector norm.
    pub dir: Vec2,
}

impl ConePiece {
    /// Radial direction at the start of the piece.
    pub fn radial_start(&self) -> Vec2 {
        self.start.unwrap_or(-self.dir)
    }

    pub fn radial_end(&self) -> Vec2 {
        self.end.unwrap_or(self.dir)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeTermination {
    /// The last piece is a ray that meets no further edge.
    Free,
    CrossingCap,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConePolyline {
    pub pieces: Vec<ConePiece>,
    /// Largest crossing-equation residual.
    pub max_residual: f64,
    pub termination: ConeTermination,
}

impl ConePolyline {
    pub fn crossings(&self) -> usize {
        self.pieces.len().saturating_sub(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweptAngles {
    /// Swept on the outgoing indicatrix.
    pub plus: f64,
    /// Swept on the incoming indicatrix.
    pub minus: f64,
}

impl TangentCone {
    /// Checks the sector count and that boundary rays are independent.
    pub fn new(label: impl Into<String>, vertex: Option<usize>, sectors: Vec<Sector>) -> Result<Self, ConeError> {
        if sectors.len() < 3 {
            return Err(ConeError::TooFewSectors(sectors.len()));
        }
        for (k, s) in sectors.iter().enumerate() {
            if !s.a.is_finite() || !s.b.is_finite() {
                return Err(ConeError::InvalidArgument("non-finite ray"));
            }
            let c = s.a.normalized().cross(s.b.normalized());
            if math::abs(c) <= DIRECTION_TOL || s.a.dot(s.b) < 0.0 && math::abs(c) < 1e-6 {
                return Err(ConeError::DegenerateSector(k));
            }
        }
        Ok(TangentCone {
            label: label.into(),
            vertex,
            sectors,
        })
    }

    /// Euclidean cone with the given sector openings (each below π).
    pub fn euclidean(angles: &[f64]) -> Result<Self, ConeError> {
        Self::uniform(MinkowskiNorm::euclidean(), angles)
    }

    /// Every sector carries `norm`; sector `k` spans Euclidean polar angles
    /// `[0, angles[k]]` with boundary rays scaled to `norm`-length 1, which
    /// keeps the gluing compatible for reversible norms.
    pub fn uniform(norm: MinkowskiNorm, angles: &[f64]) -> Result<Self, ConeError> {
        let mut sectors = Vec::with_capacity(angles.len());
        for &t in angles {
            if !(t > 0.0 && t < PI) {
                return Err(ConeError::InvalidArgument("sector opening must lie in (0, pi)"));
            }
            let a = Vec2::new(1.0, 0.0);
            let b = Vec2::from_angle(t);
            sectors.push(Sector {
                a: a / norm.eval(a),
                b: b / norm.eval(b),
                norm: norm.clone(),
                corner: None,
            });
        }
        Self::new("cone", None, sectors)
    }

    pub fn len(&self) -> usize {
        self.sectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sectors.is_empty()
    }

    fn next(&self, k: usize) -> usize {
        (k + 1) % self.sectors.len()
    }

    fn prev(&self, k: usize) -> usize {
        (k + self.sectors.len() - 1) % self.sectors.len()
    }

    /// The same cone traversed in the opposite cyclic order.
    pub fn reversed(&self) -> TangentCone {
        let sectors = self
            .sectors
            .iter()
            .rev()
            .map(|s| Sector {
                norm: s.norm.clone(),
                a: s.b,
                b: s.a,
                corner: s.corner,
            })
            .collect();
        TangentCone {
            label: self.label.clone(),
            vertex: self.vertex,
            sectors,
        }
    }

    /// Index in the reversed cone of sector `k`.
    pub fn reversed_index(&self, k: usize) -> usize {
        self.sectors.len() - 1 - k
    }

    /// Edge compatibility of every glued ray pair and sector convexity.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let mut worst = 0.0f64;
        for k in 0..self.len() {
            let (s, n) = (&self.sectors[k], &self.sectors[self.next(k)]);
            for sg in [1.0, -1.0] {
                let (x, y) = (s.norm.eval(s.b * sg), n.norm.eval(n.a * sg));
                worst = worst.max(math::abs(x - y) / x.max(y));
            }
        }
        rep.push(
            "edge-compatibility",
            worst <= crate::surface::EDGE_COMPAT_TOL,
            worst,
            format!("worst relative mismatch {worst:.3e}"),
        );
        let widest = self.sectors.iter().map(|s| s.opening()).fold(0.0, f64::max);
        rep.push(
            "convex-sectors",
            widest < PI,
            widest,
            format!("widest opening {widest:.12}"),
        );
        rep
    }

    /// Total Euclidean angle of the chart sectors.
    pub fn euclidean_angle(&self) -> f64 {
        self.sectors.iter().map(|s| s.opening()).sum()
    }

    /// Locates a ray: the sector containing it, preferring `hint`.
    pub fn sector_of(&self, r: Vec2, hint: usize) -> Option<usize> {
        if self.sectors[hint].contains(r, 1e-12) {
            return Some(hint);
        }
        None
    }

    /// Base directions spaced evenly in cumulative Euclidean chart angle,
    /// at offsets `(j + 0.5) / n` of the total.
    pub fn sample_directions(&self, n: usize, sign: DirSign) -> Vec<ConeDirection> {
        self.sample_directions_at(n, sign, 0.5)
    }

    /// Like [`TangentCone::sample_directions`] with offsets `(j + phase) / n`,
    /// `phase` in `[0, 1)`.
    pub fn sample_directions_at(&self, n: usize, sign: DirSign, phase: f64) -> Vec<ConeDirection> {
        let total = self.euclidean_angle();
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut t = total * (j as f64 + phase) / n as f64;
            for (k, s) in self.sectors.iter().enumerate() {
                let w = s.opening();
                if t <= w || k + 1 == self.len() {
                    let r = s.a.normalized().rotated(s.orientation() * t.min(w));
                    let dir = match sign {
                        DirSign::Incoming => -r / s.norm.eval(-r),
                        DirSign::Outgoing => r / s.norm.eval(r),
                    };
                    out.push(ConeDirection { sector: k, dir, sign });
                    break;
                }
                t -= w;
            }
        }
        out
    }
}

/// The tangent cone at an interior vertex of `surface`.
pub fn build_cone(surface: &Surface, vertex: usize) -> Result<TangentCone, ConeError> {
    let star = surface.vertex_star(vertex)?;
    let sectors = star
        .iter()
        .map(|c| {
            let t = surface.triangle(c.face);
            Sector {
                norm: surface.norm_of(c.face).clone(),
                a: c.entry_vector(t),
                b: c.exit_vector(t),
                corner: Some((c.face, c.corner)),
            }
        })
        .collect();
    TangentCone::new(surface.vertices()[vertex].label.clone(), Some(vertex), sectors)
}

/// `l⁺` (sum of sector arcs from `a` to `b`) or `l⁻` (from `-a` to `-b`).
pub fn total_indicatrix_length(cone: &TangentCone, sign: DirSign) -> f64 {
    cone.sectors
        .iter()
        .map(|s| match sign {
            DirSign::Outgoing => arc(&s.norm, s.a, s.b),
            DirSign::Incoming => arc(&s.norm, -s.a, -s.b),
        })
        .sum()
}

fn arc(n: &MinkowskiNorm, x: Vec2, y: Vec2) -> f64 {
    match IndicatrixArc::minor(n, x, y) {
        Ok(a) => a.length(),
        Err(_) => f64::NAN,
    }
}

struct Step {
    sector: usize,
    from: Vec2,
    to: Option<Vec2>,
    dir: Vec2,
}

/// Marches along a straight line in one direction until it stops crossing
/// edges. `forward = false` follows the geodesic backwards in time.
fn march(
    cone: &TangentCone,
    mut sector: usize,
    mut p: Vec2,
    mut u: Vec2,
    forward: bool,
    cap: usize,
    max_residual: &mut f64,
) -> Result<(Vec<Step>, ConeTermination), ConeError> {
    let mut steps = Vec::new();
    let mut entered: Option<Ray> = None;
    loop {
        let s = &cone.sectors[sector];
        let w = if forward { u } else { -u };
        let scale = p.length();
        let mut best: Option<(Ray, f64, f64)> = None;
        for (ray, e) in [(Ray::A, s.a), (Ray::B, s.b)] {
            if Some(ray) == entered {
                continue;
            }
            let cwe = w.cross(e);
            if math::abs(cwe) <= 1e-15 * e.length() {
                continue;
            }
            let t = e.cross(p) / cwe;
            let lambda = p.cross(w) / e.cross(w);
            if t > 1e-14 * scale && lambda > 0.0 && best.is_none_or(|b| t < b.1) {
                best = Some((ray, t, lambda));
            }
            if t > 1e-14 * scale && lambda <= 0.0 && math::abs(lambda) * e.length() <= 1e-14 * scale {
                return Err(ConeError::Apex);
            }
        }
        let Some((ray, _, lambda)) = best else {
            steps.push(Step {
                sector,
                from: p,
                to: None,
                dir: u,
            });
            return Ok((steps, ConeTermination::Free));
        };
        if lambda * match ray {
            Ray::A => s.a.length(),
            Ray::B => s.b.length(),
        } <= 1e-13 * scale
        {
            return Err(ConeError::Apex);
        }
        let (e_from, nxt, e_to, other, next_entered) = match ray {
            Ray::B => {
                let n = cone.next(sector);
                (s.b, n, cone.sectors[n].a, cone.sectors[n].b, Ray::A)
            }
            Ray::A => {
                let n = cone.prev(sector);
                (s.a, n, cone.sectors[n].b, cone.sectors[n].a, Ray::B)
            }
        };
        let x = e_from * lambda;
        steps.push(Step {
            sector,
            from: p,
            to: Some(x),
            dir: u,
        });
        if steps.len() > cap {
            return Ok((steps, ConeTermination::CrossingCap));
        }
        let fn_from = &s.norm;
        let fn_to = &cone.sectors[nxt].norm;
        let target = edge_pairing(fn_from, u, e_from);
        let inward = e_to.cross(other);
        let side = if forward { inward } else { -inward };
        let u2 = crossing_direction(fn_to, e_to, side, target).map_err(ConeError::Cross)?;
        *max_residual = max_residual.max(math::abs(edge_pairing(fn_to, u2, e_to) - target));
        sector = nxt;
        p = e_to * lambda;
        u = u2;
        entered = Some(next_entered);
    }
}

/// Traces the cone geodesic starting at `p` (sector chart) with velocity
/// `dir`, forward in time only.
pub fn cone_trace(cone: &TangentCone, sector: usize, p: Vec2, dir: Vec2, cap: usize) -> Result<ConePolyline, ConeError> {
    check_start(cone, sector, p, dir)?;
    let u = cone.sectors[sector].norm.unitize(dir).map_err(|_| ConeError::InvalidArgument("zero direction"))?;
    let mut res = 0.0;
    let (steps, termination) = march(cone, sector, p, u, true, cap, &mut res)?;
    Ok(ConePolyline {
        pieces: steps
            .into_iter()
            .map(|s| ConePiece {
                sector: s.sector,
                start: Some(s.from),
                end: s.to,
                dir: s.dir,
            })
            .collect(),
        max_residual: res,
        termination,
    })
}

/// The whole geodesic line through `p` with velocity `dir`, traced in both
/// time directions.
pub fn cone_line(cone: &TangentCone, sector: usize, p: Vec2, dir: Vec2, cap: usize) -> Result<ConePolyline, ConeError> {
    check_start(cone, sector, p, dir)?;
    let u = cone.sectors[sector].norm.unitize(dir).map_err(|_| ConeError::InvalidArgument("zero direction"))?;
    let mut res = 0.0;
    let (fwd, t1) = march(cone, sector, p, u, true, cap, &mut res)?;
    let (bwd, t2) = march(cone, sector, p, u, false, cap, &mut res)?;
    let mut pieces = Vec::with_capacity(fwd.len() + bwd.len());
    for s in bwd.iter().skip(1).rev() {
        pieces.push(ConePiece {
            sector: s.sector,
            start: s.to,
            end: Some(s.from),
            dir: s.dir,
        });
    }
    pieces.push(ConePiece {
        sector,
        start: bwd[0].to,
        end: fwd[0].to,
        dir: u,
    });
    for s in fwd.iter().skip(1) {
        pieces.push(ConePiece {
            sector: s.sector,
            start: Some(s.from),
            end: s.to,
            dir: s.dir,
        });
    }
    let termination = if t1 == ConeTermination::CrossingCap || t2 == ConeTermination::CrossingCap {
        ConeTermination::CrossingCap
    } else {
        ConeTermination::Free
    };
    Ok(ConePolyline {
        pieces,
        max_residual: res,
        termination,
    })
}

fn check_start(cone: &TangentCone, sector: usize, p: Vec2, dir: Vec2) -> Result<(), ConeError> {
    if sector >= cone.len() {
        return Err(ConeError::InvalidArgument("sector index out of range"));
    }
    if !p.is_finite() || !dir.is_finite() || dir.is_zero() {
        return Err(ConeError::InvalidArgument("non-finite start or zero direction"));
    }
    if p.is_zero() {
        return Err(ConeError::Apex);
    }
    if !cone.sectors[sector].contains(p, 1e-12) {
        return Err(ConeError::InvalidArgument("start point is outside its sector"));
    }
    if math::abs(p.normalized().cross(dir.normalized())) <= DIRECTION_TOL {
        return Err(ConeError::Radial);
    }
    Ok(())
}

/// Angles swept by the radial projection of `line` on the outgoing and
/// incoming indicatrices.
pub fn sweep_angles(cone: &TangentCone, line: &ConePolyline) -> Result<SweptAngles, ConeError> {
    let mut plus = 0.0;
    let mut minus = 0.0;
    for pc in &line.pieces {
        let n = &cone.sectors[pc.sector].norm;
        let (r0, r1) = (pc.radial_start(), pc.radial_end());
        if r0.is_zero() || r1.is_zero() {
            return Err(ConeError::Apex);
        }
        plus += arc(n, r0, r1);
        minus += arc(n, -r0, -r1);
    }
    Ok(SweptAngles { plus, minus })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    pub line: ConePolyline,
    pub swept: SweptAngles,
    /// Start sector, point and offset used.
    pub sector: usize,
    pub start: Vec2,
    pub epsilon: f64,
    /// The base direction was nudged off an edge-parallel configuration.
    pub non_generic: bool,
}

/// The line parallel to the radial geodesic of `v`, shifted to `side`
/// (counterclockwise in the chart of `v.sector` is left).
pub fn perturbation_trace(cone: &TangentCone, v: ConeDirection, side: Side) -> Result<Perturbation, ConeError> {
    perturbation_with_eps(cone, v, side, PERTURBATION_EPS)
}

/// [`perturbation_trace`] with an explicit base offset.
pub fn perturbation_with_eps(cone: &TangentCone, v: ConeDirection, side: Side, eps: f64) -> Result<Perturbation, ConeError> {
    let first = perturb_once(cone, v, side, eps)?;
    if !ends_edge_parallel(cone, &first.line, v.sign) {
        return Ok(first);
    }
    let s = &cone.sectors[v.sector];
    let mut nudged = v;
    for sgn in [1.0, -1.0] {
        let d = v.dir.rotated(sgn * GENERIC_NUDGE);
        let ray = if v.sign == DirSign::Incoming { -d } else { d };
        if s.contains(ray, 0.0) {
            nudged.dir = d / s.norm.eval(d);
            break;
        }
    }
    let mut p = perturb_once(cone, nudged, side, eps)?;
    p.non_generic = true;
    Ok(p)
}

fn perturb_once(cone: &TangentCone, v: ConeDirection, side: Side, eps: f64) -> Result<Perturbation, ConeError> {
    if v.sector >= cone.len() || !v.dir.is_finite() || v.dir.is_zero() {
        return Err(ConeError::InvalidArgument("bad base direction"));
    }
    let s = &cone.sectors[v.sector];
    let r = v.ray();
    if !s.contains(r, 1e-9) {
        return Err(ConeError::InvalidArgument("base direction is outside its sector"));
    }
    let mut n = v.dir.perp().normalized();
    if side == Side::Right {
        n = -n;
    }
    let mut sector = v.sector;
    let mut r = r;
    let mut dir = v.dir;
    // on a boundary ray with the offset pointing out of the sector: switch charts
    let on_a = math::abs(s.a.normalized().cross(r.normalized())) <= DIRECTION_TOL && s.a.dot(r) > 0.0;
    let on_b = math::abs(s.b.normalized().cross(r.normalized())) <= DIRECTION_TOL && s.b.dot(r) > 0.0;
    let o = s.orientation();
    let outward_a = on_a && o * s.a.cross(n) < 0.0;
    let outward_b = on_b && o * s.b.cross(n) > 0.0;
    if outward_a || outward_b {
        let (k, e_here, e_there, other) = if outward_a {
            let k = cone.prev(sector);
            (k, s.a, cone.sectors[k].b, cone.sectors[k].a)
        } else {
            let k = cone.next(sector);
            (k, s.b, cone.sectors[k].a, cone.sectors[k].b)
        };
        let mu = r.length() / e_here.length();
        r = e_there * mu;
        let nrm = &cone.sectors[k].norm;
        let d = if v.sign == DirSign::Incoming { -r } else { r };
        dir = d / nrm.eval(d);
        let perp = e_there.perp().normalized();
        n = if perp.dot(other) * e_there.cross(other) >= 0.0 && e_there.cross(perp) * e_there.cross(other) > 0.0 {
            perp
        } else {
            -perp
        };
        sector = k;
    }
    let sec = &cone.sectors[sector];
    let mut e = eps * r.length();
    let mut p = r + n * e;
    let mut tries = 0;
    while !strictly_inside(sec, p) {
        e *= 0.25;
        p = r + n * e;
        tries += 1;
        if tries > 60 {
            return Err(ConeError::InvalidArgument("no admissible offset"));
        }
    }
    let line = cone_line(cone, sector, p, dir, CONE_CROSSING_CAP)?;
    let swept = sweep_angles(cone, &line)?;
    Ok(Perturbation {
        line,
        swept,
        sector,
        start: p,
        epsilon: e,
        non_generic: false,
    })
}

fn strictly_inside(s: &Sector, p: Vec2) -> bool {
    let o = s.orientation();
    let pn = p.normalized();
    o * s.a.normalized().cross(pn) > 1e-12 && o * pn.cross(s.b.normalized()) > 1e-12
}

/// The free end of the perturbation (the one not glued to the base ray) is
/// parallel to one of its sector's rays.
fn ends_edge_parallel(cone: &TangentCone, line: &ConePolyline, sign: DirSign) -> bool {
    let pc = match sign {
        DirSign::Incoming => line.pieces.last(),
        DirSign::Outgoing => line.pieces.first(),
    };
    let Some(pc) = pc else { return false };
    let d = match sign {
        DirSign::Incoming => pc.dir,
        DirSign::Outgoing => -pc.dir,
    };
    let s = &cone.sectors[pc.sector];
    [s.a, s.b]
        .iter()
        .any(|e| math::abs(e.normalized().cross(d.normalized())) <= DIRECTION_TOL && e.dot(d) > 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureValue {
    pub label: String,
    pub base: ConeDirection,
    pub k: f64,
    pub swept_left: f64,
    pub swept_right: f64,
    /// `l⁺` for incoming bases, `l⁻` for outgoing ones.
    pub total: f64,
    pub non_generic: bool,
    /// One perturbation alone sweeps more than the whole indicatrix.
    pub wraps: bool,
}

/// `K(x, v)`: swept angles of both perturbations minus the indicatrix length.
pub fn curvature(cone: &TangentCone, v: ConeDirection) -> Result<CurvatureValue, ConeError> {
    let total = total_indicatrix_length(cone, v.sign);
    curvature_with_total(cone, v, total).map(|(c, _, _)| c)
}

fn curvature_with_total(
    cone: &TangentCone,
    v: ConeDirection,
    total: f64,
) -> Result<(CurvatureValue, Perturbation, Perturbation), ConeError> {
    let l = perturbation_trace(cone, v, Side::Left)?;
    let r = perturbation_trace(cone, v, Side::Right)?;
    let pick = |p: &Perturbation| match v.sign {
        DirSign::Incoming => p.swept.plus,
        DirSign::Outgoing => p.swept.minus,
    };
    let (sl, sr) = (pick(&l), pick(&r));
    let value = CurvatureValue {
        label: cone.label.clone(),
        base: v,
        k: sl + sr - total,
        swept_left: sl,
        swept_right: sr,
        total,
        non_generic: l.non_generic || r.non_generic,
        wraps: sl.max(sr) > total,
    };
    Ok((value, l, r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionKind {
    Unique,
    None,
    InfinitelyMany,
}

/// The set of continuations of a radial geodesic through the apex.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionSet {
    pub kind: ExtensionKind,
    pub curvature: CurvatureValue,
    /// Hessian measure of the gap between the two perturbations' free ends,
    /// walked sector by sector; 0 when the perturbations overlap.
    pub measure: f64,
    /// Free ends of the left and right perturbations as `(sector, ray)`.
    /// For incoming bases the continuations are the outgoing directions
    /// between them; for outgoing bases, the incoming directions `-ray`.
    pub from: (usize, Vec2),
    pub to: (usize, Vec2),
    /// `+1` when the gap is walked with increasing sector index.
    pub turn: i32,
}

/// Classifies the extensions of the radial geodesic with base `v`.
pub fn extension_set(cone: &TangentCone, v: ConeDirection) -> Result<ExtensionSet, ConeError> {
    let total = total_indicatrix_length(cone, v.sign);
    let (kv, l, r) = curvature_with_total(cone, v, total)?;
    let free_end = |p: &Perturbation| -> (usize, Vec2) {
        match v.sign {
            DirSign::Incoming => {
                let pc = p.line.pieces.last().unwrap();
                (pc.sector, pc.dir)
            }
            DirSign::Outgoing => {
                let pc = p.line.pieces.first().unwrap();
                (pc.sector, -pc.dir)
            }
        }
    };
    let from = free_end(&l);
    let to = free_end(&r);
    let turn = sweep_turn(cone, &l, v.sign);
    let kind = if kv.k > CURVATURE_ZERO_TOL {
        ExtensionKind::None
    } else if kv.k < -CURVATURE_ZERO_TOL {
        ExtensionKind::InfinitelyMany
    } else {
        ExtensionKind::Unique
    };
    let measure = if kind == ExtensionKind::None {
        0.0
    } else {
        gap_walk(cone, from, to, turn, v.sign)
    };
    Ok(ExtensionSet {
        kind,
        curvature: kv,
        measure,
        from,
        to,
        turn,
    })
}

/// Cyclic direction in which the left perturbation's radial projection
/// moves away from the base ray.
fn sweep_turn(cone: &TangentCone, p: &Perturbation, sign: DirSign) -> i32 {
    let pieces: Vec<&ConePiece> = match sign {
        DirSign::Incoming => p.line.pieces.iter().collect(),
        DirSign::Outgoing => p.line.pieces.iter().rev().collect(),
    };
    if pieces.len() >= 2 {
        let (a, b) = (pieces[0].sector, pieces[1].sector);
        return if b == cone.next(a) && (cone.len() > 2 || a != b) { 1 } else { -1 };
    }
    let pc = pieces[0];
    let s = &cone.sectors[pc.sector];
    let (r0, r1) = match sign {
        DirSign::Incoming => (pc.radial_start(), pc.radial_end()),
        DirSign::Outgoing => (pc.radial_end(), pc.radial_start()),
    };
    if r0.cross(r1) * s.orientation() >= 0.0 {
        1
    } else {
        -1
    }
}

fn gap_walk(cone: &TangentCone, from: (usize, Vec2), to: (usize, Vec2), turn: i32, sign: DirSign) -> f64 {
    let len = |k: usize, x: Vec2, y: Vec2| {
        let n = &cone.sectors[k].norm;
        match sign {
            DirSign::Incoming => arc(n, x, y),
            DirSign::Outgoing => arc(n, -x, -y),
        }
    };
    // angular position inside sector k, measured from the ray behind the walk
    let pos = |k: usize, x: Vec2| {
        let s = &cone.sectors[k];
        let back = if turn > 0 { s.a } else { s.b };
        math::abs(back.angle_to(x))
    };
    let (mut k, mut x) = from;
    let mut total = 0.0;
    for _ in 0..=cone.len() + 1 {
        if k == to.0 && pos(k, to.1) >= pos(k, x) - 1e-12 {
            return total + len(k, x, to.1);
        }
        let s = &cone.sectors[k];
        let ahead = if turn > 0 { s.b } else { s.a };
        total += len(k, x, ahead);
        if turn > 0 {
            k = cone.next(k);
            x = cone.sectors[k].a;
        } else {
            k = cone.prev(k);
            x = cone.sectors[k].b;
        }
    }
    f64::NAN
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConePathKind {
    Direct,
    ThroughApex,
    /// Crossings in increasing (`turn = 1`) or decreasing sector order.
    Sequence { turn: i32, crossings: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConePath {
    pub kind: ConePathKind,
    pub length: f64,
    /// Polyline vertices as `(sector, chart point)`; the apex appears as the origin.
    pub points: Vec<(usize, Vec2)>,
    pub max_residual: f64,
    /// Lengths of every candidate that was evaluated.
    pub candidates: Vec<(ConePathKind, f64)>,
    /// The winding search stopped at the hard cap instead of by its criterion.
    pub winding_cap_hit: bool,
}

/// Hard cap on the number of full turns tried for winding candidates.
pub const WINDING_CAP: usize = 16;

/// Minimizing geodesic between `p` (in `sp`) and `q` (in `sq`).
pub fn cone_two_point_geodesic(cone: &TangentCone, sp: usize, p: Vec2, sq: usize, q: Vec2) -> Result<ConePath, ConeError> {
    if sp >= cone.len() || sq >= cone.len() {
        return Err(ConeError::InvalidArgument("sector index out of range"));
    }
    if p.is_zero() || q.is_zero() {
        return Err(ConeError::Apex);
    }
    if !cone.sectors[sp].contains(p, 1e-12) || !cone.sectors[sq].contains(q, 1e-12) {
        return Err(ConeError::InvalidArgument("point outside its sector"));
    }
    let mut candidates = Vec::new();
    let apex_len = cone.sectors[sp].norm.eval(-p) + cone.sectors[sq].norm.eval(q);
    let mut best = ConePath {
        kind: ConePathKind::ThroughApex,
        length: apex_len,
        points: vec![(sp, p), (sp, Vec2::ZERO), (sq, q)],
        max_residual: 0.0,
        candidates: Vec::new(),
        winding_cap_hit: false,
    };
    candidates.push((ConePathKind::ThroughApex, apex_len));
    if sp == sq {
        let l = cone.sectors[sp].norm.eval(q - p);
        candidates.push((ConePathKind::Direct, l));
        if l < best.length {
            best = ConePath {
                kind: ConePathKind::Direct,
                length: l,
                points: vec![(sp, p), (sq, q)],
                max_residual: 0.0,
                candidates: Vec::new(),
                winding_cap_hit: false,
            };
        }
    }
    let n = cone.len();
    let radius = 1e3 * p.length().max(q.length())
        * cone
            .sectors
            .iter()
            .map(|s| 1.0 / s.a.length().min(s.b.length()))
            .fold(1.0, f64::max);
    let mut cap_hit = false;
    for turn in [1i32, -1] {
        let steps0 = if turn > 0 { (sq + n - sp) % n } else { (sp + n - sq) % n };
        let mut m = if steps0 == 0 { n } else { steps0 };
        let mut windings = 0;
        loop {
            if windings >= WINDING_CAP {
                cap_hit = true;
                break;
            }
            let kind = ConePathKind::Sequence { turn, crossings: m };
            match sequence_candidate(cone, sp, p, q, turn, m, radius) {
                Ok((len, pts, res)) => {
                    candidates.push((kind.clone(), len));
                    if len < best.length {
                        best = ConePath {
                            kind,
                            length: len,
                            points: pts,
                            max_residual: res,
                            candidates: Vec::new(),
                            winding_cap_hit: false,
                        };
                    }
                    if len >= apex_len {
                        break;
                    }
                }
                Err(_) => {
                    candidates.push((kind, f64::INFINITY));
                    break;
                }
            }
            m += n;
            windings += 1;
        }
    }
    best.candidates = candidates;
    best.winding_cap_hit = cap_hit;
    Ok(best)
}

fn sequence_candidate(
    cone: &TangentCone,
    sp: usize,
    p: Vec2,
    q: Vec2,
    turn: i32,
    m: usize,
    radius: f64,
) -> Result<(f64, Vec<(usize, Vec2)>, f64), geodesic::PathError> {
    let n = cone.len();
    let mut sectors = Vec::with_capacity(m + 1);
    let mut k = sp;
    sectors.push(k);
    let mut links = Vec::with_capacity(m);
    for _ in 0..m {
        let (e_from, nk, e_to) = if turn > 0 {
            let nk = (k + 1) % n;
            (cone.sectors[k].b, nk, cone.sectors[nk].a)
        } else {
            let nk = (k + n - 1) % n;
            (cone.sectors[k].a, nk, cone.sectors[nk].b)
        };
        let lam = radius / e_from.length();
        links.push(StripLink {
            a: Vec2::ZERO,
            b: e_from * lam,
            c: Vec2::ZERO,
            d: e_to * lam,
        });
        k = nk;
        sectors.push(k);
    }
    let strip = Strip {
        norms: sectors.iter().map(|&s| &cone.sectors[s].norm).collect(),
        links,
    };
    let r = geodesic::minimize_strip(&strip, p, q)?;
    let mut pts = vec![(sectors[0], p)];
    for (i, (x, y)) in r.crossings.iter().enumerate() {
        pts.push((sectors[i], *x));
        pts.push((sectors[i + 1], *y));
    }
    pts.push((*sectors.last().unwrap(), q));
    Ok((r.length, pts, r.max_residual))
}
