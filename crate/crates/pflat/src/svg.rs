//! SVG drawing of a traced geodesic on its unfolded face strip.
//!
//! Each face the trace visits is placed in one plane by the similarity that
//! matches the shared edge with the previously placed face. The placement is
//! an isometry only for Euclidean faces with matching edges; otherwise the
//! drawing is labeled schematic.

use std::fmt::Write as _;

use pflat_core::geodesic::GeodesicPolyline;
use pflat_core::{Mat2, MinkowskiNorm, Surface, Vec2};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 40.0;
const SCALE_TOL: f64 = 1e-9;

/// `z ↦ alpha·z + beta` or `z ↦ alpha·conj(z) + beta`, as complex numbers.
#[derive(Clone, Copy, Debug)]
struct Similarity {
    alpha: Vec2,
    beta: Vec2,
    flip: bool,
}

fn cmul(a: Vec2, b: Vec2) -> Vec2 {
    Vec2::new(a.x * b.x - a.y * b.y, a.x * b.y + a.y * b.x)
}

fn cdiv(a: Vec2, b: Vec2) -> Vec2 {
    let d = b.dot(b);
    Vec2::new((a.x * b.x + a.y * b.y) / d, (a.y * b.x - a.x * b.y) / d)
}

fn conj(z: Vec2) -> Vec2 {
    Vec2::new(z.x, -z.y)
}

impl Similarity {
    const IDENTITY: Similarity = Similarity {
        alpha: Vec2::new(1.0, 0.0),
        beta: Vec2::new(0.0, 0.0),
        flip: false,
    };

    fn apply(&self, z: Vec2) -> Vec2 {
        cmul(self.alpha, if self.flip { conj(z) } else { z }) + self.beta
    }

    /// The map with `q0 ↦ p0`, `q1 ↦ p1`.
    fn matching(q0: Vec2, q1: Vec2, p0: Vec2, p1: Vec2, flip: bool) -> Self {
        let (q0, q1) = if flip { (conj(q0), conj(q1)) } else { (q0, q1) };
        let alpha = cdiv(p1 - p0, q1 - q0);
        Similarity {
            alpha,
            beta: p0 - cmul(alpha, q0),
            flip,
        }
    }

    fn scale(&self) -> f64 {
        self.alpha.length()
    }
}

struct Placed {
    face: usize,
    map: Similarity,
}

fn is_euclidean(n: &MinkowskiNorm) -> bool {
    matches!(n, MinkowskiNorm::Riemannian { a } if *a == Mat2::IDENTITY)
}

/// Places every visited face; the second face of each crossing is laid on
/// the far side of the shared edge.
fn unfold(surface: &Surface, line: &GeodesicPolyline) -> Vec<Placed> {
    let Some(first) = line.segments.first() else {
        return Vec::new();
    };
    let mut placed = vec![Placed {
        face: first.face,
        map: Similarity::IDENTITY,
    }];
    for ev in &line.events {
        let prev = placed.last().expect("strip is never empty");
        let (fa, ea) = ev.from;
        let (fb, eb) = ev.to;
        let ta = surface.triangle(fa);
        let tb = surface.triangle(fb);
        let reversed = surface.link(fa, ea).is_some_and(|l| l.reversed);
        let p0 = prev.map.apply(ta.chart[ea]);
        let p1 = prev.map.apply(ta.chart[(ea + 1) % 3]);
        let (q0, q1) = if reversed {
            (tb.chart[(eb + 1) % 3], tb.chart[eb])
        } else {
            (tb.chart[eb], tb.chart[(eb + 1) % 3])
        };
        let apex_a = prev.map.apply(ta.chart[(ea + 2) % 3]);
        let side_a = (p1 - p0).cross(apex_a - p0);
        let mut map = Similarity::matching(q0, q1, p0, p1, false);
        let apex_b = map.apply(tb.chart[(eb + 2) % 3]);
        if (p1 - p0).cross(apex_b - p0) * side_a > 0.0 {
            map = Similarity::matching(q0, q1, p0, p1, true);
        }
        placed.push(Placed { face: fb, map });
    }
    placed
}

/// Whether the drawing is a true isometric unfolding.
pub fn is_metric(surface: &Surface, line: &GeodesicPolyline) -> bool {
    surface.norms().iter().all(|(_, n)| is_euclidean(n))
        && unfold(surface, line)
            .iter()
            .all(|p| (p.map.scale() - 1.0).abs() <= SCALE_TOL)
}

/// Face strip, trace, crossing points and vertex markers.
pub fn render(surface: &Surface, line: &GeodesicPolyline) -> String {
    let placed = unfold(surface, line);
    let metric = is_metric(surface, line);
    let corners: Vec<[Vec2; 3]> = placed
        .iter()
        .map(|p| surface.triangle(p.face).chart.map(|c| p.map.apply(c)))
        .collect();
    let path: Vec<(Vec2, Vec2)> = line
        .segments
        .iter()
        .zip(&placed)
        .map(|(s, p)| (p.map.apply(s.entry), p.map.apply(s.exit)))
        .collect();

    let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for c in corners.iter().flatten() {
        lo = Vec2::new(lo.x.min(c.x), lo.y.min(c.y));
        hi = Vec2::new(hi.x.max(c.x), hi.y.max(c.y));
    }
    if corners.is_empty() {
        lo = Vec2::ZERO;
        hi = Vec2::new(1.0, 1.0);
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
    let k = (WIDTH - 2.0 * MARGIN) / span;
    let height = (hi.y - lo.y) * k + 2.0 * MARGIN + 30.0;
    let px = |p: Vec2| (MARGIN + (p.x - lo.x) * k, MARGIN + 30.0 + (hi.y - p.y) * k);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}">"#
    );
    let title = if metric {
        "unfolded face strip (isometric)".to_string()
    } else {
        "schematic: faces placed by edge-matching similarities, distances are not metric".to_string()
    };
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="14">{title}</text>"#);
    let _ = writeln!(s, r##"<g fill="#eef2f7" stroke="#5b6b80" stroke-width="1">"##);
    for (p, c) in placed.iter().zip(&corners) {
        let pts: Vec<String> = c.iter().map(|&q| {
            let (x, y) = px(q);
            format!("{x:.3},{y:.3}")
        }).collect();
        let _ = writeln!(s, r#"<polygon data-triangle="{}" points="{}"/>"#, surface.triangle(p.face).id, pts.join(" "));
    }
    s.push_str("</g>\n");
    let mut pts: Vec<String> = Vec::new();
    for (a, b) in &path {
        for q in [a, b] {
            let (x, y) = px(*q);
            pts.push(format!("{x:.3},{y:.3}"));
        }
    }
    pts.dedup();
    let _ = writeln!(
        s,
        r##"<polyline fill="none" stroke="#c0392b" stroke-width="2" points="{}"/>"##,
        pts.join(" ")
    );
    s.push_str("<g fill=\"#c0392b\">\n");
    for (a, _) in path.iter().skip(1) {
        let (x, y) = px(*a);
        let _ = writeln!(s, r#"<circle class="crossing" cx="{x:.3}" cy="{y:.3}" r="3.5"/>"#);
    }
    s.push_str("</g>\n<g fill=\"#1f2d3d\" font-family=\"sans-serif\" font-size=\"11\">\n");
    for (p, c) in placed.iter().zip(&corners) {
        for (j, q) in c.iter().enumerate() {
            let (x, y) = px(*q);
            let label = &surface.vertices()[surface.vertex_of_corner(p.face, j)].label;
            let _ = writeln!(s, r#"<circle class="vertex" cx="{x:.3}" cy="{y:.3}" r="2.5"/>"#);
            let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}">{}</text>"#, x + 4.0, y - 4.0, escape(label));
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
