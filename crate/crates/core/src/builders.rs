//! Standard surfaces: Platonic solids, a flat torus, a refraction pair, and
//! a generic builder for triangulated polyhedra in 3-space.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::minkowski::MinkowskiNorm;
use crate::surface::{EdgeGlue, Surface, SurfaceError, Triangle};
use crate::vec2::{Mat2, Vec2};

/// One face of a mesh: global vertex indices, chart positions and norm id.
#[derive(Clone, Debug)]
pub struct MeshFace {
    pub vertices: [usize; 3],
    pub chart: [Vec2; 3],
    pub norm: String,
}

/// Assembles a surface from faces that name their vertices by index.
/// Edges shared by two faces are glued; opposite traversal directions give
/// `reversed = true`.
pub fn from_mesh(norms: Vec<(String, MinkowskiNorm)>, faces: &[MeshFace]) -> Result<Surface, SurfaceError> {
    let mut triangles = Vec::with_capacity(faces.len());
    let mut open: BTreeMap<(usize, usize), (usize, usize, bool)> = BTreeMap::new();
    let mut gluings = Vec::new();
    for (i, f) in faces.iter().enumerate() {
        triangles.push(Triangle {
            id: i as i64,
            chart: f.chart,
            norm: f.norm.clone(),
            labels: f.vertices.map(|v| format!("v{v}")),
        });
        for e in 0..3 {
            let (a, b) = (f.vertices[e], f.vertices[(e + 1) % 3]);
            let key = (a.min(b), a.max(b));
            match open.remove(&key) {
                Some((g, ge, forward)) => gluings.push(EdgeGlue {
                    a: (g as i64, ge),
                    b: (i as i64, e),
                    reversed: forward != (a < b),
                }),
                None => {
                    open.insert(key, (i, e, a < b));
                }
            }
        }
    }
    Surface::new(norms, triangles, gluings)
}

type P3 = [f64; 3];

fn sub3(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: P3, b: P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Isometric planar placement of a 3D triangle: first vertex at the origin,
/// second on the positive x-axis, third above it.
pub fn flatten_triangle(a: P3, b: P3, c: P3) -> [Vec2; 3] {
    let ab = sub3(b, a);
    let ac = sub3(c, a);
    let l = math::sqrt(dot3(ab, ab));
    let x = dot3(ac, ab) / l;
    let n = cross3(ab, ac);
    let y = math::sqrt(dot3(n, n)) / l;
    [Vec2::ZERO, Vec2::new(l, 0.0), Vec2::new(x, y)]
}

/// Orients every face so that its normal points away from the centroid of
/// the point set (valid for star-shaped polyhedra).
fn orient_outward(points: &[P3], faces: &mut [[usize; 3]]) {
    let n = points.len() as f64;
    let mut c = [0.0; 3];
    for p in points {
        for i in 0..3 {
            c[i] += p[i] / n;
        }
    }
    for f in faces.iter_mut() {
        let (a, b, d) = (points[f[0]], points[f[1]], points[f[2]]);
        let nrm = cross3(sub3(b, a), sub3(d, a));
        if dot3(nrm, sub3(a, c)) < 0.0 {
            f.swap(1, 2);
        }
    }
}

/// A polyhedron with Euclidean faces (shared norm id `"e"`).
pub fn euclidean_polyhedron(points: &[P3], faces: &[[usize; 3]]) -> Result<Surface, SurfaceError> {
    let mesh: Vec<MeshFace> = faces
        .iter()
        .map(|f| MeshFace {
            vertices: *f,
            chart: flatten_triangle(points[f[0]], points[f[1]], points[f[2]]),
            norm: "e".into(),
        })
        .collect();
    from_mesh(vec![("e".into(), MinkowskiNorm::euclidean())], &mesh)
}

/// A polyhedron whose face `i` is drawn in the chart `maps[i]·(isometric
/// placement)` and carries the Riemannian norm that makes that chart
/// isometric to the 3D face.
pub fn riemannian_polyhedron(points: &[P3], faces: &[[usize; 3]], maps: &[Mat2]) -> Result<Surface, SurfaceError> {
    let mut norms = Vec::with_capacity(faces.len());
    let mut mesh = Vec::with_capacity(faces.len());
    for (i, f) in faces.iter().enumerate() {
        let m = maps[i];
        let inv = m.inverse().ok_or(SurfaceError::NonFinite("singular chart map"))?;
        // F(y) = |M⁻¹ y|
        let a = inv.transpose().mul_mat(&inv);
        let a = Mat2::symmetric(a.m[0][0], 0.5 * (a.m[0][1] + a.m[1][0]), a.m[1][1]);
        let id = format!("f{i}");
        norms.push((id.clone(), MinkowskiNorm::Riemannian { a }));
        let flat = flatten_triangle(points[f[0]], points[f[1]], points[f[2]]);
        mesh.push(MeshFace {
            vertices: *f,
            chart: flat.map(|p| m.apply(p)),
            norm: id,
        });
    }
    from_mesh(norms, &mesh)
}

/// Regular tetrahedron with unit edges.
pub fn tetrahedron() -> Surface {
    let s = 1.0 / math::sqrt(8.0);
    let pts = [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]];
    let mut faces = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    orient_outward(&pts, &mut faces);
    euclidean_polyhedron(&pts, &faces).expect("tetrahedron is well formed")
}

/// Regular octahedron with unit edges.
pub fn octahedron() -> Surface {
    let (pts, faces) = octahedron_mesh();
    euclidean_polyhedron(&pts, &faces).expect("octahedron is well formed")
}

/// Vertices and outward-oriented faces of the regular octahedron with unit edges.
pub fn octahedron_mesh() -> (Vec<P3>, Vec<[usize; 3]>) {
    let h = 1.0 / math::sqrt(2.0);
    let pts = vec![
        [h, 0.0, 0.0],
        [-h, 0.0, 0.0],
        [0.0, h, 0.0],
        [0.0, -h, 0.0],
        [0.0, 0.0, h],
        [0.0, 0.0, -h],
    ];
    let mut faces = Vec::new();
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                faces.push([x, y, z]);
            }
        }
    }
    orient_outward(&pts, &mut faces);
    (pts, faces)
}

/// Regular icosahedron (unit circumradius), outward oriented.
pub fn icosahedron_mesh() -> (Vec<P3>, Vec<[usize; 3]>) {
    let t = (1.0 + math::sqrt(5.0)) / 2.0;
    let raw = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let r = math::sqrt(1.0 + t * t);
    let pts: Vec<P3> = raw.iter().map(|p| [p[0] / r, p[1] / r, p[2] / r]).collect();
    let mut faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    orient_outward(&pts, &mut faces);
    (pts, faces)
}

/// Unit cube; each square face is split along a diagonal and drawn in the
/// axis-aligned unit-square chart. All faces carry `norm` (id `"n"`).
///
/// Chart transitions between faces are rotations by multiples of a right
/// angle, so any norm invariant under the symmetries of the square is
/// compatible across every edge.
pub fn cube(norm: MinkowskiNorm) -> Surface {
    let (quads, _) = cube_quads();
    let sq = [
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(0.0, 1.0),
    ];
    let mut mesh = Vec::new();
    for q in quads {
        mesh.push(MeshFace {
            vertices: [q[0], q[1], q[2]],
            chart: [sq[0], sq[1], sq[2]],
            norm: "n".into(),
        });
        mesh.push(MeshFace {
            vertices: [q[0], q[2], q[3]],
            chart: [sq[0], sq[2], sq[3]],
            norm: "n".into(),
        });
    }
    from_mesh(vec![("n".into(), norm)], &mesh).expect("cube is well formed")
}

/// Faces of the unit cube as counterclockwise (seen from outside) quads over
/// vertices `x + 2y + 4z`.
fn cube_quads() -> ([[usize; 4]; 6], [P3; 8]) {
    let mut pts = [[0.0; 3]; 8];
    for (i, p) in pts.iter_mut().enumerate() {
        *p = [(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64];
    }
    (
        [
            [0, 2, 3, 1],
            [4, 5, 7, 6],
            [0, 1, 5, 4],
            [2, 6, 7, 3],
            [0, 4, 6, 2],
            [1, 3, 7, 5],
        ],
        pts,
    )
}

/// Flat torus from the unit square: two triangles, three gluings, one vertex.
pub fn flat_torus() -> Surface {
    let v = |x, y| Vec2::new(x, y);
    let lab = || ["v".to_string(), "v".to_string(), "v".to_string()];
    let t0 = Triangle {
        id: 0,
        chart: [v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0)],
        norm: "e".into(),
        labels: lab(),
    };
    let t1 = Triangle {
        id: 1,
        chart: [v(0.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)],
        norm: "e".into(),
        labels: lab(),
    };
    let g = |ea, eb| EdgeGlue {
        a: (0, ea),
        b: (1, eb),
        reversed: true,
    };
    Surface::new(
        vec![("e".into(), MinkowskiNorm::euclidean())],
        vec![t0, t1],
        // bottom/top, right/left, diagonal
        vec![g(0, 1), g(1, 2), g(2, 0)],
    )
    .expect("torus is well formed")
}

/// One Euclidean triangle `(0,0), (1,0), (0,1)` with labels `a, b, c`.
pub fn single_triangle() -> Surface {
    Surface::new(
        vec![("e".into(), MinkowskiNorm::euclidean())],
        vec![Triangle {
            id: 0,
            chart: [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)],
            norm: "e".into(),
            labels: ["a".into(), "b".into(), "c".into()],
        }],
        vec![],
    )
    .expect("triangle is well formed")
}

/// The unit square split along its diagonal into two Euclidean triangles:
/// face 0 is `(0,0), (1,0), (1,1)`, face 1 is `(0,0), (1,1), (0,1)`.
pub fn unit_square() -> Surface {
    let v = |x, y| Vec2::new(x, y);
    Surface::new(
        vec![("e".into(), MinkowskiNorm::euclidean())],
        vec![
            Triangle {
                id: 0,
                chart: [v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0)],
                norm: "e".into(),
                labels: ["a".into(), "b".into(), "c".into()],
            },
            Triangle {
                id: 1,
                chart: [v(0.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)],
                norm: "e".into(),
                labels: ["a".into(), "c".into(), "d".into()],
            },
        ],
        vec![EdgeGlue {
            a: (0, 2),
            b: (1, 0),
            reversed: true,
        }],
    )
    .expect("square is well formed")
}

/// Two triangles meeting along the x-axis segment `[-2, 2]`: the lower one
/// (face 0) Euclidean, the upper one (face 1) carrying `n·|y|`.
///
/// For `n ≠ 1` the edge lengths disagree, so the surface fails validation;
/// it exists to exercise the refraction law.
pub fn snell_pair(n: f64) -> Surface {
    let v = |x, y| Vec2::new(x, y);
    Surface::new(
        vec![
            ("lower".into(), MinkowskiNorm::euclidean()),
            ("upper".into(), MinkowskiNorm::Riemannian { a: Mat2::scaled_identity(n * n) }),
        ],
        vec![
            Triangle {
                id: 0,
                chart: [v(-2.0, 0.0), v(0.0, -2.0), v(2.0, 0.0)],
                norm: "lower".into(),
                labels: ["l".into(), "s".into(), "r".into()],
            },
            Triangle {
                id: 1,
                chart: [v(-2.0, 0.0), v(2.0, 0.0), v(0.0, 2.0)],
                norm: "upper".into(),
                labels: ["l".into(), "r".into(), "n".into()],
            },
        ],
        vec![EdgeGlue {
            a: (0, 2),
            b: (1, 0),
            reversed: true,
        }],
    )
    .expect("pair is well formed")
}

/// Two faces sharing the edge from `(0,0)` to `(1,0)`: face 0 below with
/// norm `f1`, face 1 above with norm `f2`, both with apex at `apex_below` /
/// `apex_above`.
pub fn two_face(f1: MinkowskiNorm, f2: MinkowskiNorm, apex_below: Vec2, apex_above: Vec2) -> Result<Surface, SurfaceError> {
    let v = |x, y| Vec2::new(x, y);
    Surface::new(
        vec![("below".into(), f1), ("above".into(), f2)],
        vec![
            Triangle {
                id: 0,
                chart: [v(0.0, 0.0), apex_below, v(1.0, 0.0)],
                norm: "below".into(),
                labels: ["p".into(), "s".into(), "q".into()],
            },
            Triangle {
                id: 1,
                chart: [v(0.0, 0.0), v(1.0, 0.0), apex_above],
                norm: "above".into(),
                labels: ["p".into(), "q".into(), "n".into()],
            },
        ],
        vec![EdgeGlue {
            a: (0, 2),
            b: (1, 0),
            reversed: true,
        }],
    )
}

/// `surface` with face `face` carrying `F(y) + κ·ℓ₀ℓ₁ℓ₂/|y|²`, where `F` is
/// its current norm and `ℓᵢ = eᵢ × y` for the face's edge vectors. The
/// extra term is odd and vanishes along every edge, so the gluing stays
/// compatible while the face stops being reversible.
pub fn odd_mutation(surface: &Surface, face: usize, kappa: f64) -> Result<Surface, SurfaceError> {
    let base = surface.norm_of(face).clone();
    let t = surface.triangle(face);
    let e = [t.edge_vector(0), t.edge_vector(1), t.edge_vector(2)];
    let scale = e.iter().map(|v| v.length()).product::<f64>();
    let norm = MinkowskiNorm::custom("odd-mutation", false, move |y: Vec2| {
        let n2 = y.dot(y);
        if n2 == 0.0 {
            return 0.0;
        }
        base.eval(y) + kappa * e[0].cross(y) * e[1].cross(y) * e[2].cross(y) / (scale * n2)
    });
    surface.with_face_norm(face, "mutated", norm)
}
