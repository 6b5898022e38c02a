//! The JSON surface file.
//!
//! ```json
//! {
//!   "norms": [{"id": "e", "type": "riemannian", "matrix": [[1, 0], [0, 1]]}],
//!   "triangles": [{"id": 0, "chart": [[0, 0], [1, 0], [0, 1]], "norm": "e", "labels": ["a", "b", "c"]}],
//!   "gluings": [{"a": [0, 2], "b": [1, 0], "reversed": true}]
//! }
//! ```
//!
//! Norm types are `riemannian` (`matrix`), `randers` (`matrix`, `beta`),
//! `quartic` (`c`) and `custom-poly` (`coeffs`, see
//! [`MinkowskiNorm::Poly`]).

use std::fmt;

use pflat_core::surface::{EdgeGlue, Triangle};
use pflat_core::{Mat2, MinkowskiNorm, Surface, SurfaceError, Vec2};
use serde_json::{json, Map, Value};

#[derive(Debug)]
pub enum ParseError {
    /// Not valid JSON.
    Syntax { line: usize, column: usize, message: String },
    /// Well-formed JSON with a missing or mistyped field.
    Schema { path: String, message: String },
    /// Only raised in strict mode.
    UnknownKey { path: String },
    /// The data parsed but does not describe a surface.
    Surface(SurfaceError),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            ParseError::Schema { path, message } => write!(f, "{path}: {message}"),
            ParseError::UnknownKey { path } => write!(f, "{path}: unknown key"),
            ParseError::Surface(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug)]
pub struct Parsed {
    pub surface: Surface,
    /// Unknown keys skipped in lenient mode.
    pub warnings: Vec<String>,
}

struct Reader {
    strict: bool,
    warnings: Vec<String>,
}

fn schema(path: &str, message: impl Into<String>) -> ParseError {
    ParseError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

impl Reader {
    fn object<'v>(&mut self, v: &'v Value, path: &str, known: &[&str]) -> Result<&'v Map<String, Value>, ParseError> {
        let obj = v.as_object().ok_or_else(|| schema(path, "expected an object"))?;
        for key in obj.keys() {
            if !known.contains(&key.as_str()) {
                let at = format!("{path}.{key}");
                if self.strict {
                    return Err(ParseError::UnknownKey { path: at });
                }
                self.warnings.push(format!("{at}: unknown key ignored"));
            }
        }
        Ok(obj)
    }
}

fn field<'v>(obj: &'v Map<String, Value>, path: &str, key: &str) -> Result<&'v Value, ParseError> {
    obj.get(key).ok_or_else(|| schema(&format!("{path}.{key}"), "missing"))
}

fn array<'v>(v: &'v Value, path: &str, len: Option<usize>) -> Result<&'v [Value], ParseError> {
    let a = v.as_array().ok_or_else(|| schema(path, "expected an array"))?;
    match len {
        Some(n) if a.len() != n => Err(schema(path, format!("expected {n} entries, found {}", a.len()))),
        _ => Ok(a),
    }
}

fn number(v: &Value, path: &str) -> Result<f64, ParseError> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| schema(path, "expected a finite number"))
}

fn string(v: &Value, path: &str) -> Result<String, ParseError> {
    v.as_str().map(str::to_string).ok_or_else(|| schema(path, "expected a string"))
}

fn vec2(v: &Value, path: &str) -> Result<Vec2, ParseError> {
    let a = array(v, path, Some(2))?;
    Ok(Vec2::new(number(&a[0], &format!("{path}[0]"))?, number(&a[1], &format!("{path}[1]"))?))
}

fn mat2(v: &Value, path: &str) -> Result<Mat2, ParseError> {
    let rows = array(v, path, Some(2))?;
    let r0 = vec2(&rows[0], &format!("{path}[0]"))?;
    let r1 = vec2(&rows[1], &format!("{path}[1]"))?;
    Ok(Mat2::new(r0.x, r0.y, r1.x, r1.y))
}

fn edge_ref(v: &Value, path: &str) -> Result<(i64, usize), ParseError> {
    let a = array(v, path, Some(2))?;
    let tri = a[0].as_i64().ok_or_else(|| schema(&format!("{path}[0]"), "expected an integer triangle id"))?;
    let edge = a[1].as_u64().ok_or_else(|| schema(&format!("{path}[1]"), "expected an edge index"))?;
    Ok((tri, edge as usize))
}

fn norm(r: &mut Reader, v: &Value, path: &str) -> Result<(String, MinkowskiNorm), ParseError> {
    let head = v.as_object().ok_or_else(|| schema(path, "expected an object"))?;
    let kind = string(field(head, path, "type")?, &format!("{path}.type"))?;
    let known: &[&str] = match kind.as_str() {
        "riemannian" => &["id", "type", "matrix"],
        "randers" => &["id", "type", "matrix", "beta"],
        "quartic" => &["id", "type", "c"],
        "custom-poly" => &["id", "type", "coeffs"],
        other => return Err(schema(&format!("{path}.type"), format!("unknown norm type {other:?}"))),
    };
    let obj = r.object(v, path, known)?;
    let id = string(field(obj, path, "id")?, &format!("{path}.id"))?;
    let invalid = |e: pflat_core::NormError| schema(path, e.to_string());
    let n = match kind.as_str() {
        "riemannian" => MinkowskiNorm::riemannian(mat2(field(obj, path, "matrix")?, &format!("{path}.matrix"))?),
        "randers" => MinkowskiNorm::randers(
            mat2(field(obj, path, "matrix")?, &format!("{path}.matrix"))?,
            vec2(field(obj, path, "beta")?, &format!("{path}.beta"))?,
        ),
        "quartic" => MinkowskiNorm::quartic(number(field(obj, path, "c")?, &format!("{path}.c"))?),
        _ => {
            let p = format!("{path}.coeffs");
            let coeffs = array(field(obj, path, "coeffs")?, &p, None)?
                .iter()
                .enumerate()
                .map(|(k, c)| number(c, &format!("{p}[{k}]")))
                .collect::<Result<Vec<_>, _>>()?;
            MinkowskiNorm::poly(coeffs)
        }
    }
    .map_err(invalid)?;
    Ok((id, n))
}

fn triangle(r: &mut Reader, v: &Value, path: &str) -> Result<Triangle, ParseError> {
    let obj = r.object(v, path, &["id", "chart", "norm", "labels"])?;
    let id = field(obj, path, "id")?
        .as_i64()
        .ok_or_else(|| schema(&format!("{path}.id"), "expected an integer"))?;
    let cp = format!("{path}.chart");
    let chart = array(field(obj, path, "chart")?, &cp, Some(3))?;
    let lp = format!("{path}.labels");
    let labels = array(field(obj, path, "labels")?, &lp, Some(3))?;
    Ok(Triangle {
        id,
        chart: [
            vec2(&chart[0], &format!("{cp}[0]"))?,
            vec2(&chart[1], &format!("{cp}[1]"))?,
            vec2(&chart[2], &format!("{cp}[2]"))?,
        ],
        norm: string(field(obj, path, "norm")?, &format!("{path}.norm"))?,
        labels: [
            string(&labels[0], &format!("{lp}[0]"))?,
            string(&labels[1], &format!("{lp}[1]"))?,
            string(&labels[2], &format!("{lp}[2]"))?,
        ],
    })
}

fn gluing(r: &mut Reader, v: &Value, path: &str) -> Result<EdgeGlue, ParseError> {
    let obj = r.object(v, path, &["a", "b", "reversed"])?;
    Ok(EdgeGlue {
        a: edge_ref(field(obj, path, "a")?, &format!("{path}.a"))?,
        b: edge_ref(field(obj, path, "b")?, &format!("{path}.b"))?,
        reversed: field(obj, path, "reversed")?
            .as_bool()
            .ok_or_else(|| schema(&format!("{path}.reversed"), "expected a boolean"))?,
    })
}

/// Parses a surface file. Unknown keys are errors when `strict` and
/// warnings otherwise.
pub fn parse_surface(text: &str, strict: bool) -> Result<Parsed, ParseError> {
    let root: Value = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut r = Reader {
        strict,
        warnings: Vec::new(),
    };
    let top = r.object(&root, "$", &["norms", "triangles", "gluings"])?;
    let norms = array(field(top, "$", "norms")?, "$.norms", None)?
        .iter()
        .enumerate()
        .map(|(i, v)| norm(&mut r, v, &format!("$.norms[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let triangles = array(field(top, "$", "triangles")?, "$.triangles", None)?
        .iter()
        .enumerate()
        .map(|(i, v)| triangle(&mut r, v, &format!("$.triangles[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let gluings = match top.get("gluings") {
        Some(g) => array(g, "$.gluings", None)?
            .iter()
            .enumerate()
            .map(|(i, v)| gluing(&mut r, v, &format!("$.gluings[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    let surface = Surface::new(norms, triangles, gluings).map_err(ParseError::Surface)?;
    Ok(Parsed {
        surface,
        warnings: r.warnings,
    })
}

#[derive(Debug, PartialEq)]
pub struct SerializeError {
    pub norm: String,
}

impl fmt::Display for SerializeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "norm {:?} is a closure and has no file representation", self.norm)
    }
}

impl std::error::Error for SerializeError {}

fn pair(v: Vec2) -> Value {
    json!([v.x, v.y])
}

fn matrix(m: &Mat2) -> Value {
    json!([[m.m[0][0], m.m[0][1]], [m.m[1][0], m.m[1][1]]])
}

/// The file representation of `surface`; exact for every norm but
/// [`MinkowskiNorm::Custom`].
pub fn surface_to_value(surface: &Surface) -> Result<Value, SerializeError> {
    let norms = surface
        .norms()
        .iter()
        .map(|(id, n)| {
            Ok(match n {
                MinkowskiNorm::Riemannian { a } => json!({"id": id, "type": "riemannian", "matrix": matrix(a)}),
                MinkowskiNorm::Randers { a, b } => {
                    json!({"id": id, "type": "randers", "matrix": matrix(a), "beta": pair(*b)})
                }
                MinkowskiNorm::Quartic { c } => json!({"id": id, "type": "quartic", "c": c}),
                MinkowskiNorm::Poly { coeffs } => json!({"id": id, "type": "custom-poly", "coeffs": coeffs}),
                MinkowskiNorm::Custom(_) => return Err(SerializeError { norm: id.clone() }),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let triangles: Vec<Value> = surface
        .triangles()
        .iter()
        .map(|t| {
            json!({
                "id": t.id,
                "chart": t.chart.iter().map(|p| pair(*p)).collect::<Vec<_>>(),
                "norm": t.norm,
                "labels": t.labels,
            })
        })
        .collect();
    let gluings: Vec<Value> = surface
        .gluings()
        .iter()
        .map(|g| json!({"a": [g.a.0, g.a.1], "b": [g.b.0, g.b.1], "reversed": g.reversed}))
        .collect();
    Ok(json!({"norms": norms, "triangles": triangles, "gluings": gluings}))
}

/// Pretty-printed file text with sorted keys.
pub fn serialize_surface(surface: &Surface) -> Result<String, SerializeError> {
    let v = surface_to_value(surface)?;
    let mut s = serde_json::to_string_pretty(&v).expect("a json value always serializes");
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pflat_core::builders;

    #[test]
    fn round_trip_is_exact() {
        for s in [
            builders::tetrahedron(),
            builders::flat_torus(),
            builders::snell_pair(2.0),
            builders::cube(MinkowskiNorm::quartic(0.5).unwrap()),
        ] {
            let text = serialize_surface(&s).unwrap();
            let back = parse_surface(&text, true).unwrap();
            assert_eq!(back.surface, s);
            assert!(back.warnings.is_empty());
            assert_eq!(serialize_surface(&back.surface).unwrap(), text);
        }
    }

    #[test]
    fn randers_and_poly_survive() {
        let r = MinkowskiNorm::randers(Mat2::IDENTITY, Vec2::new(0.0, 0.3)).unwrap();
        let p = MinkowskiNorm::poly(vec![1.0, 0.0, 0.5, 0.0, 1.0]).unwrap();
        let s = builders::tetrahedron()
            .with_face_norm(0, "r", r)
            .unwrap()
            .with_face_norm(1, "p", p)
            .unwrap();
        let back = parse_surface(&serialize_surface(&s).unwrap(), true).unwrap();
        assert_eq!(back.surface, s);
    }

    #[test]
    fn custom_norms_do_not_serialize() {
        let m = builders::odd_mutation(&builders::tetrahedron(), 0, 0.05).unwrap();
        assert_eq!(serialize_surface(&m).unwrap_err().norm, "mutated");
    }

    const ONE: &str = r#"{"norms": [{"id": "e", "type": "riemannian", "matrix": [[1, 0], [0, 1]]}],
        "triangles": [{"id": 0, "chart": [[0, 0], [1, 0], [0, 1]], "norm": "e", "labels": ["a", "b", "c"], "color": "red"}],
        "gluings": []}"#;

    #[test]
    fn unknown_keys_warn_or_fail() {
        let p = parse_surface(ONE, false).unwrap();
        assert_eq!(p.warnings, vec!["$.triangles[0].color: unknown key ignored".to_string()]);
        match parse_surface(ONE, true).unwrap_err() {
            ParseError::UnknownKey { path } => assert_eq!(path, "$.triangles[0].color"),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn errors_carry_locations() {
        match parse_surface("{\"norms\": [\n  1,]}", false).unwrap_err() {
            ParseError::Syntax { line, .. } => assert_eq!(line, 2),
            e => panic!("{e:?}"),
        }
        let bad = ONE.replace("[1, 0], [0, 1]]", "[1, 0], [0, \"x\"]]");
        match parse_surface(&bad, false).unwrap_err() {
            ParseError::Schema { path, .. } => assert_eq!(path, "$.norms[0].matrix[1][1]"),
            e => panic!("{e:?}"),
        }
        let dangling = ONE.replace("\"norm\": \"e\"", "\"norm\": \"q\"");
        assert!(matches!(
            parse_surface(&dangling, false).unwrap_err(),
            ParseError::Surface(SurfaceError::DanglingNorm { .. })
        ));
        let kind = ONE.replace("riemannian", "hyperbolic");
        assert!(matches!(parse_surface(&kind, false).unwrap_err(), ParseError::Schema { .. }));
    }

    #[test]
    fn non_finite_numbers_are_rejected() {
        let big = ONE.replace("[1, 0], [0, 1]]", "[1e400, 0], [0, 1]]");
        assert!(parse_surface(&big, false).is_err());
    }
}
