//! Geodesics across edges: the crossing solver, the face-to-face tracer and
//! length minimization over a fixed sequence of edges.
//!
//! Inside a face a geodesic is a straight chart segment. At an edge with
//! edge vector `v` the incoming unit direction `u⁻` and the outgoing unit
//! direction `u⁺` satisfy
//!
//! ```text
//! ⟨u⁻, v⟩_{u⁻} = ⟨u⁺, v⟩_{u⁺}
//! ```
//!
//! with each side's Hessian inner product. For a unit `u` the left side is
//! `∇F(u)·v`, which is strictly monotone as `u` turns from `v` to `-v`; the
//! solver bisects on that.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math::{self, PI};
use crate::minkowski::MinkowskiNorm;
use crate::optimize;
use crate::surface::Surface;
use crate::vec2::Vec2;
use crate::DIRECTION_TOL;

/// Residual below which a crossing counts as solved.
pub const CROSSING_TOL: f64 = 1e-12;

const BISECT_ITERS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CrossError {
    /// The incoming direction runs along the edge; the geodesic continues
    /// along the edge itself.
    Tangential,
    /// No direction on the far side matches the target (only possible when
    /// the two norms disagree on the edge).
    NoSolution { target: f64, lo: f64, hi: f64 },
    InvalidArgument(&'static str),
}

impl fmt::Display for CrossError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossError::Tangential => write!(f, "direction is tangential to the edge"),
            CrossError::NoSolution { target, lo, hi } => {
                write!(f, "crossing target {target} outside the attainable range [{lo}, {hi}]")
            }
            CrossError::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
        }
    }
}

impl core::error::Error for CrossError {}

/// The `F`-unit direction `u` on side `side` of the edge vector `e`
/// (`side > 0`: counterclockwise from `e`) with `∇F(u)·e = target`.
pub fn crossing_direction(f: &MinkowskiNorm, e: Vec2, side: f64, target: f64) -> Result<Vec2, CrossError> {
    if !e.is_finite() || e.is_zero() {
        return Err(CrossError::InvalidArgument("edge vector must be finite and nonzero"));
    }
    if !target.is_finite() {
        return Err(CrossError::InvalidArgument("non-finite crossing target"));
    }
    let hi = f.eval(e);
    let lo = -f.eval(-e);
    let slack = 1e-14 * (hi - lo);
    if target >= hi - slack || target <= lo + slack {
        if math::abs(target - hi) <= slack || math::abs(target - lo) <= slack {
            return Err(CrossError::Tangential);
        }
        return Err(CrossError::NoSolution { target, lo, hi });
    }
    let eh = e.normalized();
    let s = if side >= 0.0 { 1.0 } else { -1.0 };
    // decreasing in theta: F(e) at 0, -F(-e) at pi
    let g = |theta: f64| f.gradient(eh.rotated(s * theta)).dot(e) - target;
    let theta = optimize::bisect(g, 0.0, PI, BISECT_ITERS);
    let w = eh.rotated(s * theta);
    Ok(w / f.eval(w))
}

/// `∇F(u)·v`, the Hessian pairing `⟨u, v⟩_u` for `F`-unit `u`.
pub fn edge_pairing(f: &MinkowskiNorm, u: Vec2, v: Vec2) -> f64 {
    f.gradient(u).dot(v)
}

/// Continues the `F1`-unit direction `u_in` across the line spanned by
/// `v_edge` into a half-plane carrying `F2`. Both norms are expressed in one
/// common chart; `u_in` points into the `F2` side.
pub fn cross_edge(f1: &MinkowskiNorm, f2: &MinkowskiNorm, v_edge: Vec2, u_in: Vec2) -> Result<Vec2, CrossError> {
    if !u_in.is_finite() || !v_edge.is_finite() {
        return Err(CrossError::InvalidArgument("non-finite input"));
    }
    if v_edge.is_zero() {
        return Err(CrossError::InvalidArgument("zero edge vector"));
    }
    if math::abs(f1.eval(u_in) - 1.0) > DIRECTION_TOL {
        return Err(CrossError::InvalidArgument("incoming direction is not unit"));
    }
    let c = v_edge.normalized().cross(u_in.normalized());
    if math::abs(c) <= DIRECTION_TOL {
        return Err(CrossError::Tangential);
    }
    crossing_direction(f2, v_edge, c, edge_pairing(f1, u_in, v_edge))
}

/// Inverse of [`cross_edge`]: the `F1`-unit incoming direction that
/// continues as the `F2`-unit `u_out`.
pub fn cross_edge_backward(
    f1: &MinkowskiNorm,
    f2: &MinkowskiNorm,
    v_edge: Vec2,
    u_out: Vec2,
) -> Result<Vec2, CrossError> {
    if !u_out.is_finite() || !v_edge.is_finite() || v_edge.is_zero() {
        return Err(CrossError::InvalidArgument("non-finite or zero input"));
    }
    if math::abs(f2.eval(u_out) - 1.0) > DIRECTION_TOL {
        return Err(CrossError::InvalidArgument("outgoing direction is not unit"));
    }
    let c = v_edge.normalized().cross(u_out.normalized());
    if math::abs(c) <= DIRECTION_TOL {
        return Err(CrossError::Tangential);
    }
    crossing_direction(f1, v_edge, c, edge_pairing(f2, u_out, v_edge))
}

/// A point and an `F`-unit direction in the chart of `face`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectedPoint {
    pub face: usize,
    pub pos: Vec2,
    pub dir: Vec2,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingEvent {
    pub gluing: usize,
    pub from: (usize, usize),
    pub to: (usize, usize),
    pub point_from: Vec2,
    pub point_to: Vec2,
    pub u_in: Vec2,
    pub u_out: Vec2,
    pub residual: f64,
    /// Set when the direction ran along the edge.
    pub degenerate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub face: usize,
    pub entry: Vec2,
    pub exit: Vec2,
    /// `F(exit - entry)` in the face norm.
    pub length: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Termination {
    LengthBudget,
    Boundary { face: usize, edge: usize },
    VertexHit { vertex: usize },
    CrossingCap,
    /// The far side offers no matching direction (incompatible edge).
    NoContinuation { face: usize, edge: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicPolyline {
    pub segments: Vec<Segment>,
    pub events: Vec<CrossingEvent>,
    pub termination: Termination,
}

impl GeodesicPolyline {
    pub fn length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceLimits {
    pub max_length: f64,
    pub max_crossings: usize,
    /// Relative distance along an edge within which an endpoint counts as hit.
    pub vertex_tol: f64,
}

impl Default for TraceLimits {
    fn default() -> Self {
        TraceLimits {
            max_length: f64::INFINITY,
            max_crossings: 1000,
            vertex_tol: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TraceError {
    InvalidStart(&'static str),
    Boundary { face: usize, edge: usize },
    VertexHit { vertex: usize },
    Cross(CrossError),
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceError::InvalidStart(w) => write!(f, "invalid start: {w}"),
            TraceError::Boundary { face, edge } => write!(f, "edge {edge} of face {face} is a boundary edge"),
            TraceError::VertexHit { vertex } => write!(f, "point is at vertex {vertex}"),
            TraceError::Cross(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for TraceError {}

/// Which edge of `face` contains `pos` (relative tolerance `tol`), with the
/// parameter along it.
fn locate_on_edge(surface: &Surface, face: usize, pos: Vec2, tol: f64) -> Option<(usize, f64)> {
    let t = surface.triangle(face);
    let mut best: Option<(usize, f64, f64)> = None;
    for k in 0..3 {
        let p = t.chart[k];
        let e = t.edge_vector(k);
        let l2 = e.dot(e);
        let par = (pos - p).dot(e) / l2;
        let dist = math::abs((pos - p).cross(e)) / l2;
        if dist <= tol && (-tol..=1.0 + tol).contains(&par) && best.is_none_or(|b| dist < b.2) {
            best = Some((k, par.clamp(0.0, 1.0), dist));
        }
    }
    best.map(|(k, par, _)| (k, par))
}

fn interior_side(surface: &Surface, face: usize, edge: usize) -> f64 {
    let t = surface.triangle(face);
    let e = t.edge_vector(edge);
    e.cross(t.chart[(edge + 2) % 3] - t.chart[edge])
}

/// Crosses edge `edge` of `face` at parameter `t` with unit direction `u`.
fn cross_at(
    surface: &Surface,
    face: usize,
    edge: usize,
    t: f64,
    u: Vec2,
) -> Result<(DirectedPoint, CrossingEvent), TraceError> {
    let link = surface
        .link(face, edge)
        .ok_or(TraceError::Boundary { face, edge })?;
    let (ea, eb) = surface.matched_edge_vectors(face, edge).unwrap();
    let (_, _, t2) = surface.map_edge_parameter(face, edge, t).unwrap();
    let tb = surface.triangle(link.face);
    let xb = tb.chart[link.edge] + tb.edge_vector(link.edge) * t2;
    let xa = surface.triangle(face).chart[edge] + ea * t;
    let fa = surface.norm_of(face);
    let fb = surface.norm_of(link.face);
    let target = edge_pairing(fa, u, ea);
    let side = eb.cross(tb.chart[(link.edge + 2) % 3] - tb.chart[link.edge]);
    let u_out = crossing_direction(fb, eb, side, target).map_err(TraceError::Cross)?;
    let residual = math::abs(edge_pairing(fb, u_out, eb) - target);
    let ev = CrossingEvent {
        gluing: link.gluing,
        from: (face, edge),
        to: (link.face, link.edge),
        point_from: xa,
        point_to: xb,
        u_in: u,
        u_out,
        residual,
        degenerate: false,
    };
    Ok((
        DirectedPoint {
            face: link.face,
            pos: xb,
            dir: u_out,
        },
        ev,
    ))
}

/// Continues a point lying on a glued edge (and pointing out of its face)
/// into the neighbouring face.
pub fn transport_across(surface: &Surface, from: DirectedPoint, vertex_tol: f64) -> Result<DirectedPoint, TraceError> {
    let (edge, t) = locate_on_edge(surface, from.face, from.pos, 1e-9).ok_or(TraceError::InvalidStart(
        "point is not on an edge of its face",
    ))?;
    let tri = surface.triangle(from.face);
    if t <= vertex_tol {
        return Err(TraceError::VertexHit {
            vertex: surface.vertex_of_corner(from.face, edge),
        });
    }
    if t >= 1.0 - vertex_tol {
        return Err(TraceError::VertexHit {
            vertex: surface.vertex_of_corner(from.face, (edge + 1) % 3),
        });
    }
    let c = tri.edge_vector(edge).normalized().cross(from.dir.normalized());
    if math::abs(c) <= DIRECTION_TOL {
        return Err(TraceError::Cross(CrossError::Tangential));
    }
    if c * interior_side(surface, from.face, edge) > 0.0 {
        return Err(TraceError::InvalidStart("direction points into the face"));
    }
    let u = surface.norm_of(from.face).unitize(from.dir).map_err(|_| TraceError::InvalidStart("zero direction"))?;
    cross_at(surface, from.face, edge, t, u).map(|(p, _)| p)
}

/// Traces the geodesic from `start` until a limit, a vertex or the boundary.
///
/// The start may lie inside a face or on one of its edges with a direction
/// pointing into the face.
pub fn trace(surface: &Surface, start: DirectedPoint, limits: TraceLimits) -> Result<GeodesicPolyline, TraceError> {
    if start.face >= surface.face_count() {
        return Err(TraceError::InvalidStart("face index out of range"));
    }
    if !start.pos.is_finite() || !start.dir.is_finite() || start.dir.is_zero() {
        return Err(TraceError::InvalidStart("non-finite position or zero direction"));
    }
    let t = surface.triangle(start.face);
    let scale = t.edge_vector(0).length().max(t.edge_vector(2).length());
    let area = t.signed_area2();
    if (0..3).any(|k| area * t.edge_vector(k).cross(start.pos - t.chart[k]) < -1e-12 * scale * scale) {
        return Err(TraceError::InvalidStart("position outside the face"));
    }
    let mut face = start.face;
    let mut pos = start.pos;
    let mut u = surface.norm_of(face).unitize(start.dir).unwrap();
    let mut entry = None;
    if let Some((k, _)) = locate_on_edge(surface, face, pos, 1e-12) {
        let side = interior_side(surface, face, k);
        let c = surface.triangle(face).edge_vector(k).normalized().cross(u.normalized());
        if c * side <= 0.0 {
            return Err(TraceError::InvalidStart("direction leaves the face at the start point"));
        }
        entry = Some(k);
    }

    let mut segments = Vec::new();
    let mut events = Vec::new();
    let mut travelled = 0.0;
    let termination = loop {
        let tri = surface.triangle(face);
        let area = tri.signed_area2();
        let mut exit: Option<(usize, f64, f64)> = None;
        for k in 0..3 {
            if Some(k) == entry {
                continue;
            }
            let e = tri.edge_vector(k);
            let cr = u.cross(e);
            // leaving through edge k means turning to its outer side
            if cr * area <= 0.0 {
                continue;
            }
            let d = tri.chart[k] - pos;
            let s = d.cross(e) / cr;
            let t = d.cross(u) / cr;
            if exit.is_none_or(|x| s < x.1) {
                exit = Some((k, s.max(0.0), t.clamp(0.0, 1.0)));
            }
        }
        let Some((k, s, t)) = exit else {
            break Termination::NoContinuation { face, edge: entry.unwrap_or(0) };
        };
        let fnorm = surface.norm_of(face);
        let mut x = tri.chart[k] + tri.edge_vector(k) * t;
        let mut len = fnorm.eval(x - pos);
        if !len.is_finite() {
            len = s;
        }
        if travelled + len >= limits.max_length {
            let rem = limits.max_length - travelled;
            x = pos + u * rem;
            segments.push(Segment {
                face,
                entry: pos,
                exit: x,
                length: fnorm.eval(x - pos),
            });
            break Termination::LengthBudget;
        }
        segments.push(Segment {
            face,
            entry: pos,
            exit: x,
            length: len,
        });
        travelled += len;
        if t <= limits.vertex_tol {
            break Termination::VertexHit {
                vertex: surface.vertex_of_corner(face, k),
            };
        }
        if t >= 1.0 - limits.vertex_tol {
            break Termination::VertexHit {
                vertex: surface.vertex_of_corner(face, (k + 1) % 3),
            };
        }
        if surface.link(face, k).is_none() {
            break Termination::Boundary { face, edge: k };
        }
        if events.len() >= limits.max_crossings {
            break Termination::CrossingCap;
        }
        match cross_at(surface, face, k, t, u) {
            Ok((next, ev)) => {
                events.push(ev);
                face = next.face;
                pos = next.pos;
                u = next.dir;
                entry = Some(ev.to.1);
            }
            Err(TraceError::Cross(CrossError::Tangential)) => {
                // the continuation runs along the edge into one of its endpoints
                let e = tri.edge_vector(k);
                let forward = edge_pairing(fnorm, u, e) > 0.0;
                let corner = if forward { (k + 1) % 3 } else { k };
                let end = tri.chart[corner];
                segments.push(Segment {
                    face,
                    entry: x,
                    exit: end,
                    length: fnorm.eval(end - x),
                });
                events.push(CrossingEvent {
                    gluing: surface.link(face, k).unwrap().gluing,
                    from: (face, k),
                    to: (face, k),
                    point_from: x,
                    point_to: x,
                    u_in: u,
                    u_out: u,
                    residual: 0.0,
                    degenerate: true,
                });
                break Termination::VertexHit {
                    vertex: surface.vertex_of_corner(face, corner),
                };
            }
            Err(_) => break Termination::NoContinuation { face, edge: k },
        }
    };
    Ok(GeodesicPolyline {
        segments,
        events,
        termination,
    })
}

/// Matched endpoints of one crossing of a strip: the segment `a → b` in the
/// chart before the crossing is identified pointwise with `c → d` in the
/// chart after it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripLink {
    pub a: Vec2,
    pub b: Vec2,
    pub c: Vec2,
    pub d: Vec2,
}

/// A chain of flat pieces joined along segments.
#[derive(Clone, Debug)]
pub struct Strip<'a> {
    pub norms: Vec<&'a MinkowskiNorm>,
    pub links: Vec<StripLink>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathError {
    /// The optimum pushes a crossing into an endpoint of its edge.
    VertexOnPath { crossing: usize, at_start: bool },
    BadSequence(&'static str),
    NotConverged { residual: f64 },
}

impl fmt::Display for PathError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathError::VertexOnPath { crossing, at_start } => write!(
                f,
                "optimal path passes through the {} endpoint of crossing {crossing}",
                if *at_start { "first" } else { "second" }
            ),
            PathError::BadSequence(w) => write!(f, "bad edge sequence: {w}"),
            PathError::NotConverged { residual } => write!(f, "minimization stalled at residual {residual:e}"),
        }
    }
}

impl core::error::Error for PathError {}

#[derive(Clone, Debug, PartialEq)]
pub struct StripPath {
    /// Crossing offsets in `[0, 1]`.
    pub s: Vec<f64>,
    /// Crossing points in the chart before and after each crossing.
    pub crossings: Vec<(Vec2, Vec2)>,
    pub length: f64,
    /// Largest crossing-equation residual `|∇F_k(u)·E_k - ∇F_{k+1}(u')·D_k|`.
    pub max_residual: f64,
}

/// Offsets closer than this to 0 or 1 put the path through an edge endpoint.
const ENDPOINT_TOL: f64 = 1e-9;

impl<'a> Strip<'a> {
    fn check(&self) -> Result<(), PathError> {
        if self.norms.len() != self.links.len() + 1 {
            return Err(PathError::BadSequence("need one more piece than crossings"));
        }
        Ok(())
    }

    fn segments(&self, p: Vec2, q: Vec2, s: &[f64]) -> Vec<Vec2> {
        let m = self.links.len();
        let mut out = Vec::with_capacity(m + 1);
        let mut prev = p;
        for (k, l) in self.links.iter().enumerate() {
            let xin = l.a + (l.b - l.a) * s[k];
            out.push(xin - prev);
            prev = l.c + (l.d - l.c) * s[k];
        }
        out.push(q - prev);
        out
    }

    /// Total length for offsets `s`.
    pub fn length(&self, p: Vec2, q: Vec2, s: &[f64]) -> f64 {
        self.segments(p, q, s)
            .iter()
            .zip(&self.norms)
            .map(|(y, n)| n.eval(*y))
            .sum()
    }

    fn grad_k(&self, segs: &[Vec2], k: usize) -> f64 {
        let l = &self.links[k];
        grad_or_zero(self.norms[k], segs[k]).dot(l.b - l.a) - grad_or_zero(self.norms[k + 1], segs[k + 1]).dot(l.d - l.c)
    }

    /// Derivative of the length in `s[k]`; equals the crossing residual.
    pub fn gradient(&self, p: Vec2, q: Vec2, s: &[f64]) -> Vec<f64> {
        let segs = self.segments(p, q, s);
        (0..self.links.len()).map(|k| self.grad_k(&segs, k)).collect()
    }
}

fn grad_or_zero(n: &MinkowskiNorm, y: Vec2) -> Vec2 {
    if y.is_zero() {
        Vec2::ZERO
    } else {
        n.gradient(y)
    }
}

/// Minimizes the length of the path `p → crossings → q` through the strip.
///
/// The length is strictly convex in the offsets, so coordinate descent with
/// exact 1-D steps (bisection on the derivative) converges to the unique
/// minimizer; a Newton phase on the tridiagonal Hessian finishes it.
pub fn minimize_strip(strip: &Strip<'_>, p: Vec2, q: Vec2) -> Result<StripPath, PathError> {
    strip.check()?;
    let m = strip.links.len();
    let mut s = vec![0.5; m];
    let scale = strip
        .links
        .iter()
        .map(|l| (l.b - l.a).length().max((l.d - l.c).length()))
        .fold(0.0f64, f64::max)
        .max(1e-300);

    for _sweep in 0..200 {
        let mut change = 0.0f64;
        for k in 0..m {
            let old = s[k];
            let mut probe = s.clone();
            let mut d = |x: f64| {
                probe[k] = x;
                let segs = strip.segments(p, q, &probe);
                strip.grad_k(&segs, k)
            };
            let new = if d(0.0) >= 0.0 {
                0.0
            } else if d(1.0) <= 0.0 {
                1.0
            } else {
                let mut lo = 0.0;
                let mut hi = 1.0;
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if d(mid) > 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            };
            s[k] = new;
            change = change.max(math::abs(new - old));
        }
        if change < 1e-7 {
            break;
        }
    }

    newton_polish(strip, p, q, &mut s);

    let g = strip.gradient(p, q, &s);
    for (k, &sk) in s.iter().enumerate() {
        if sk <= ENDPOINT_TOL && g[k] >= -1e-12 * scale {
            return Err(PathError::VertexOnPath { crossing: k, at_start: true });
        }
        if sk >= 1.0 - ENDPOINT_TOL && g[k] <= 1e-12 * scale {
            return Err(PathError::VertexOnPath { crossing: k, at_start: false });
        }
    }
    let max_residual = g.iter().fold(0.0f64, |a, &x| a.max(math::abs(x)));
    if max_residual > 1e-9 * scale.max(1.0) {
        return Err(PathError::NotConverged { residual: max_residual });
    }
    let crossings = strip
        .links
        .iter()
        .zip(&s)
        .map(|(l, &sk)| (l.a + (l.b - l.a) * sk, l.c + (l.d - l.c) * sk))
        .collect();
    Ok(StripPath {
        length: strip.length(p, q, &s),
        s,
        crossings,
        max_residual,
    })
}

fn newton_polish(strip: &Strip<'_>, p: Vec2, q: Vec2, s: &mut [f64]) {
    let m = s.len();
    if m == 0 {
        return;
    }
    for _ in 0..50 {
        let segs = strip.segments(p, q, s);
        let g: Vec<f64> = (0..m).map(|k| strip.grad_k(&segs, k)).collect();
        let gmax = g.iter().fold(0.0f64, |a, &x| a.max(math::abs(x)));
        if gmax < 1e-14 {
            return;
        }
        let h: Vec<_> = segs
            .iter()
            .zip(&strip.norms)
            .map(|(y, n)| if y.is_zero() { None } else { Some(n.hessian_of_norm(*y)) })
            .collect();
        let mut diag = vec![0.0; m];
        let mut off = vec![0.0; m.saturating_sub(1)];
        for k in 0..m {
            let l = &strip.links[k];
            let (e, d) = (l.b - l.a, l.d - l.c);
            let (Some(hk), Some(hk1)) = (h[k], h[k + 1]) else { return };
            diag[k] = hk.bilinear(e, e) + hk1.bilinear(d, d);
            if k + 1 < m {
                let ln = &strip.links[k + 1];
                off[k] = -hk1.bilinear(d, ln.b - ln.a);
            }
        }
        let rhs: Vec<f64> = g.iter().map(|x| -x).collect();
        let Some(step) = optimize::solve_tridiagonal(&off, &diag, &off, &rhs) else { return };
        let f0 = strip.length(p, q, s);
        let mut alpha = 1.0;
        let mut accepted = false;
        let mut trial = s.to_vec();
        for _ in 0..40 {
            for k in 0..m {
                trial[k] = (s[k] + alpha * step[k]).clamp(0.0, 1.0);
            }
            if strip.length(p, q, &trial) <= f0 + 1e-15 * f0.max(1.0) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            return;
        }
        let moved = trial.iter().zip(s.iter()).fold(0.0f64, |a, (x, y)| a.max(math::abs(x - y)));
        s.copy_from_slice(&trial);
        if moved < 1e-16 {
            return;
        }
    }
}

/// Shortest path from `p` (chart of `faces[0]`) to `q` (chart of the last
/// face) crossing `edges[k]` of `faces[k]` into `faces[k + 1]`.
pub fn min_path_over_sequence(
    surface: &Surface,
    faces: &[usize],
    edges: &[usize],
    p: Vec2,
    q: Vec2,
) -> Result<StripPath, PathError> {
    if faces.is_empty() || edges.len() + 1 != faces.len() {
        return Err(PathError::BadSequence("need one more face than edges"));
    }
    let mut links = Vec::with_capacity(edges.len());
    for (k, &e) in edges.iter().enumerate() {
        let (f, g) = (faces[k], faces[k + 1]);
        if f >= surface.face_count() || g >= surface.face_count() || e > 2 {
            return Err(PathError::BadSequence("index out of range"));
        }
        let l = surface.link(f, e).ok_or(PathError::BadSequence("boundary edge in sequence"))?;
        if l.face != g {
            return Err(PathError::BadSequence("consecutive faces are not glued along the edge"));
        }
        let ta = surface.triangle(f);
        let tb = surface.triangle(g);
        let (qa, qb) = (tb.chart[l.edge], tb.chart[(l.edge + 1) % 3]);
        let (c, d) = if l.reversed { (qb, qa) } else { (qa, qb) };
        links.push(StripLink {
            a: ta.chart[e],
            b: ta.chart[(e + 1) % 3],
            c,
            d,
        });
    }
    let strip = Strip {
        norms: faces.iter().map(|&f| surface.norm_of(f)).collect(),
        links,
    };
    minimize_strip(&strip, p, q)
}
