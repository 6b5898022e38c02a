//! JSON reports. Every float is rounded to 12 significant digits; keys come
//! out sorted.

use pflat_core::classify::{
    AdjacentCheck, BerwaldMeasure, ClassificationReport, EdgeMeasure, GaussBonnetReport, ThetaReport, Thresholds,
    VertexCurvature,
};
use pflat_core::cone::{ConePath, ConePathKind, DirSign, ExtensionKind, ExtensionSet};
use pflat_core::geodesic::{GeodesicPolyline, Termination};
use pflat_core::{Mat2, Surface, ValidationReport, Vec2};
use serde_json::{json, Number, Value};

/// `x` rounded to 12 significant digits; `null` when not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    // keep -0 out of the output
    Number::from_f64(if r == 0.0 { 0.0 } else { r }).map_or(Value::Null, Value::Number)
}

pub fn vec(v: Vec2) -> Value {
    json!([num(v.x), num(v.y)])
}

pub fn mat(m: &Mat2) -> Value {
    json!([[num(m.m[0][0]), num(m.m[0][1])], [num(m.m[1][0]), num(m.m[1][1])]])
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| num(*x)).collect())
}

/// Serialized output text: pretty JSON and a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("a json value always serializes");
    s.push('\n');
    s
}

pub fn validation(surface: &Surface, report: &ValidationReport, warnings: &[String]) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "passed": c.passed, "worst": num(c.worst), "detail": c.detail}))
        .collect();
    json!({
        "passed": report.passed(),
        "checks": checks,
        "warnings": warnings,
        "faces": surface.face_count(),
        "edges": surface.edge_count(),
        "vertices": surface.vertices().len(),
        "closed": surface.is_closed(),
        "euler_characteristic": surface.euler_characteristic(),
    })
}

fn edge(surface: &Surface, face: usize, edge: usize) -> Value {
    json!([surface.triangle(face).id, edge])
}

fn termination(surface: &Surface, t: &Termination) -> Value {
    match *t {
        Termination::LengthBudget => json!({"kind": "length-budget"}),
        Termination::Boundary { face, edge: e } => json!({"kind": "boundary", "edge": edge(surface, face, e)}),
        Termination::VertexHit { vertex } => {
            json!({"kind": "vertex-hit", "vertex": surface.vertices()[vertex].label})
        }
        Termination::CrossingCap => json!({"kind": "crossing-cap"}),
        Termination::NoContinuation { face, edge: e } => {
            json!({"kind": "no-continuation", "edge": edge(surface, face, e)})
        }
    }
}

pub fn polyline(surface: &Surface, line: &GeodesicPolyline) -> Value {
    let segments: Vec<Value> = line
        .segments
        .iter()
        .map(|s| {
            json!({
                "triangle": surface.triangle(s.face).id,
                "entry": vec(s.entry),
                "exit": vec(s.exit),
                "length": num(s.length),
            })
        })
        .collect();
    let events: Vec<Value> = line
        .events
        .iter()
        .map(|e| {
            json!({
                "gluing": e.gluing,
                "from": edge(surface, e.from.0, e.from.1),
                "to": edge(surface, e.to.0, e.to.1),
                "point_from": vec(e.point_from),
                "point_to": vec(e.point_to),
                "u_in": vec(e.u_in),
                "u_out": vec(e.u_out),
                "residual": num(e.residual),
                "degenerate": e.degenerate,
            })
        })
        .collect();
    json!({
        "segments": segments,
        "events": events,
        "crossings": line.events.len(),
        "length": num(line.length()),
        "termination": termination(surface, &line.termination),
    })
}

pub fn vertex_curvature(v: &VertexCurvature) -> Value {
    json!({
        "vertex": v.label,
        "mean": num(v.mean),
        "stddev": num(v.stddev),
        "samples": nums(&v.values),
        "l_plus": num(v.l_plus),
        "l_minus": num(v.l_minus),
        "non_generic": v.non_generic,
        "wraps": v.wraps,
    })
}

pub fn theta(t: &ThetaReport) -> Value {
    let components: Vec<Value> = t
        .components
        .iter()
        .map(|c| json!({"faces": c.faces.len(), "value": num(c.value), "deviation": num(c.deviation)}))
        .collect();
    match t.single() {
        Some((value, deviation)) => json!({"value": num(value), "deviation": num(deviation), "components": components}),
        None => json!({"value": null, "deviation": null, "components": components}),
    }
}

fn edge_pair(e: &EdgeMeasure) -> Value {
    json!({"a": [e.a.0, e.a.1], "b": [e.b.0, e.b.1]})
}

pub fn landsberg(edges: &[EdgeMeasure]) -> Value {
    Value::Array(
        edges
            .iter()
            .map(|e| json!({"edge": edge_pair(e), "defect": num(e.value)}))
            .collect(),
    )
}

pub fn berwald(edges: &[BerwaldMeasure]) -> Value {
    Value::Array(
        edges
            .iter()
            .map(|e| {
                json!({
                    "edge": edge_pair(&e.edge),
                    "residual": num(e.edge.value),
                    "matrix": mat(&e.matrix),
                    "norm_mismatch": e.norm_mismatch.map_or(Value::Null, num),
                })
            })
            .collect(),
    )
}

pub fn thresholds(t: &Thresholds) -> Value {
    json!({"landsberg": num(t.landsberg), "berwald": num(t.berwald), "theta": num(t.theta)})
}

pub fn classification(r: &ClassificationReport) -> Value {
    json!({
        "thresholds": thresholds(&r.thresholds),
        "is_landsberg": r.is_landsberg,
        "is_berwald": r.is_berwald,
        "landsberg": landsberg(&r.landsberg),
        "berwald": berwald(&r.berwald),
        "theta": theta(&r.theta),
    })
}

fn adjacent(a: &AdjacentCheck) -> Value {
    json!({"gluing": a.gluing, "z1": a.z1, "z2": a.z2, "lhs": num(a.lhs), "rhs": num(a.rhs), "residual": num(a.residual)})
}

/// The identity summary; the per-vertex table is reported separately.
pub fn gauss_bonnet(r: &GaussBonnetReport) -> Value {
    json!({
        "sum_K": num(r.sum_k),
        "theta": num(r.theta),
        "theta_deviation": num(r.theta_deviation),
        "chi": r.chi,
        "theta_chi": num(r.theta_chi),
        "residual": num(r.residual),
        "hypothesis_violated": r.hypothesis_violated,
        "adjacent": r.adjacent.iter().map(adjacent).collect::<Vec<_>>(),
        "max_adjacent_residual": num(r.max_adjacent_residual),
    })
}

pub fn sign(s: DirSign) -> &'static str {
    match s {
        DirSign::Incoming => "incoming",
        DirSign::Outgoing => "outgoing",
    }
}

pub fn extension(e: &ExtensionSet) -> Value {
    let kind = match e.kind {
        ExtensionKind::Unique => "unique",
        ExtensionKind::None => "none",
        ExtensionKind::InfinitelyMany => "infinitely-many",
    };
    let c = &e.curvature;
    json!({
        "sector": c.base.sector,
        "dir": vec(c.base.dir),
        "kind": kind,
        "K": num(c.k),
        "swept_left": num(c.swept_left),
        "swept_right": num(c.swept_right),
        "measure": num(e.measure),
        "from": {"sector": e.from.0, "ray": vec(e.from.1)},
        "to": {"sector": e.to.0, "ray": vec(e.to.1)},
        "non_generic": c.non_generic,
        "wraps": c.wraps,
    })
}

fn path_kind(k: &ConePathKind) -> Value {
    match k {
        ConePathKind::Direct => json!({"kind": "direct"}),
        ConePathKind::ThroughApex => json!({"kind": "through-apex"}),
        ConePathKind::Sequence { turn, crossings } => {
            json!({"kind": "sequence", "turn": turn, "crossings": crossings})
        }
    }
}

/// `points` are `(sector, face id, chart point)` in face coordinates.
pub fn cone_path(p: &ConePath, points: &[(usize, i64, Vec2)]) -> Value {
    let candidates: Vec<Value> = p
        .candidates
        .iter()
        .map(|(k, l)| {
            let mut v = path_kind(k);
            v["length"] = num(*l);
            v
        })
        .collect();
    json!({
        "length": num(p.length),
        "path": path_kind(&p.kind),
        "points": points
            .iter()
            .map(|(s, f, q)| json!({"sector": s, "triangle": f, "point": vec(*q)}))
            .collect::<Vec<_>>(),
        "candidates": candidates,
        "max_residual": num(p.max_residual),
        "winding_cap_hit": p.winding_cap_hit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(4.0 * std::f64::consts::PI).to_string(), "12.5663706144");
        assert_eq!(num(1.0 / 3.0).to_string(), "0.333333333333");
        assert_eq!(num(-0.0).to_string(), "0.0");
        assert_eq!(num(2.5e-17).to_string(), "2.5e-17");
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(num(f64::INFINITY), Value::Null);
    }

    #[test]
    fn keys_are_sorted() {
        let s = render(&json!({"b": 1, "a": {"d": 2, "c": 3}}));
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.find("\"c\"").unwrap() < s.find("\"d\"").unwrap());
    }
}
