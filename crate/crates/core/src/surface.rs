//! Triangulated surfaces with one Minkowski norm per face.
//!
//! Every triangle lives in its own chart. Edge `i` joins local vertices `i`
//! and `(i + 1) % 3`. A gluing identifies two edges pointwise; with
//! `reversed = true` local vertex `i` of side A meets local vertex `j + 1` of
//! side B, otherwise it meets `j`. The point at parameter `t` along edge A
//! (from its first endpoint) is identified with the point at the matching
//! parameter along edge B.
//!
//! Topology (vertices, stars, boundary) is derived from the gluings alone;
//! the per-corner labels only name the vertices.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::minkowski::MinkowskiNorm;
use crate::validation::ValidationReport;
use crate::vec2::Vec2;

/// Relative tolerance for matching norm lengths across a gluing.
pub const EDGE_COMPAT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Triangle {
    pub id: i64,
    pub chart: [Vec2; 3],
    pub norm: String,
    pub labels: [String; 3],
}

impl Triangle {
    /// Twice the signed chart area; positive for counterclockwise charts.
    pub fn signed_area2(&self) -> f64 {
        (self.chart[1] - self.chart[0]).cross(self.chart[2] - self.chart[0])
    }

    pub fn edge_vector(&self, edge: usize) -> Vec2 {
        self.chart[(edge + 1) % 3] - self.chart[edge]
    }
}

/// Identification of edge `a.1` of triangle `a.0` with edge `b.1` of triangle `b.0`
/// (triangle ids as in the file).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeGlue {
    pub a: (i64, usize),
    pub b: (i64, usize),
    pub reversed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceError {
    DuplicateNorm(String),
    DuplicateTriangle(i64),
    DanglingNorm { triangle: i64, norm: String },
    DanglingTriangle(i64),
    EdgeIndex { triangle: i64, edge: usize },
    SelfGluing { triangle: i64, edge: usize },
    DuplicateGluing { triangle: i64, edge: usize },
    DegenerateTriangle(i64),
    NonFinite(&'static str),
    /// The split point is not strictly inside the face.
    SplitOutside,
    NonManifoldVertex(String),
    BoundaryVertex(String),
    NotClosed { boundary_edges: usize },
    UnknownVertex(String),
}

impl fmt::Display for SurfaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceError::DuplicateNorm(id) => write!(f, "duplicate norm id {id:?}"),
            SurfaceError::DuplicateTriangle(id) => write!(f, "duplicate triangle id {id}"),
            SurfaceError::DanglingNorm { triangle, norm } => {
                write!(f, "triangle {triangle} references unknown norm {norm:?}")
            }
            SurfaceError::DanglingTriangle(id) => write!(f, "gluing references unknown triangle {id}"),
            SurfaceError::EdgeIndex { triangle, edge } => {
                write!(f, "edge index {edge} of triangle {triangle} is not in 0..3")
            }
            SurfaceError::SelfGluing { triangle, edge } => {
                write!(f, "edge {edge} of triangle {triangle} is glued to itself")
            }
            SurfaceError::DuplicateGluing { triangle, edge } => {
                write!(f, "edge {edge} of triangle {triangle} appears in more than one gluing")
            }
            SurfaceError::DegenerateTriangle(id) => write!(f, "triangle {id} has zero chart area"),
            SurfaceError::NonFinite(what) => write!(f, "non-finite value in {what}"),
            SurfaceError::SplitOutside => write!(f, "split point is not strictly inside the face"),
            SurfaceError::NonManifoldVertex(v) => write!(f, "vertex {v} has a non-manifold link"),
            SurfaceError::BoundaryVertex(v) => write!(f, "vertex {v} lies on the boundary"),
            SurfaceError::NotClosed { boundary_edges } => {
                write!(f, "surface has {boundary_edges} boundary edges")
            }
            SurfaceError::UnknownVertex(v) => write!(f, "no vertex named {v:?}"),
        }
    }
}

impl core::error::Error for SurfaceError {}

/// The far side of a glued edge, in face indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeLink {
    pub face: usize,
    pub edge: usize,
    pub reversed: bool,
    pub gluing: usize,
}

/// One triangle corner of a vertex star, with the two edges meeting there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StarCorner {
    pub face: usize,
    pub corner: usize,
    /// Edge shared with the previous corner of the star.
    pub entry_edge: usize,
    /// Edge shared with the next corner of the star.
    pub exit_edge: usize,
}

impl StarCorner {
    /// Chart vector from the corner along the entry edge.
    pub fn entry_vector(&self, t: &Triangle) -> Vec2 {
        t.chart[other_end(self.entry_edge, self.corner)] - t.chart[self.corner]
    }

    /// Chart vector from the corner along the exit edge.
    pub fn exit_vector(&self, t: &Triangle) -> Vec2 {
        t.chart[other_end(self.exit_edge, self.corner)] - t.chart[self.corner]
    }
}

/// The endpoint of `edge` that is not `corner`.
pub fn other_end(edge: usize, corner: usize) -> usize {
    if edge == corner {
        (edge + 1) % 3
    } else {
        edge
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub label: String,
    /// All corners identified with this vertex; in cyclic star order for
    /// interior vertices and in fan order for boundary vertices.
    pub corners: Vec<StarCorner>,
    pub boundary: bool,
}

#[derive(Clone, Debug)]
pub struct Surface {
    norms: Vec<(String, MinkowskiNorm)>,
    triangles: Vec<Triangle>,
    gluings: Vec<EdgeGlue>,
    face_norm: Vec<usize>,
    links: Vec<[Option<EdgeLink>; 3]>,
    vertices: Vec<Vertex>,
    corner_vertex: Vec<[usize; 3]>,
}

impl PartialEq for Surface {
    fn eq(&self, o: &Self) -> bool {
        self.norms == o.norms && self.triangles == o.triangles && self.gluings == o.gluings
    }
}

impl Surface {
    /// Resolves references and derives the topology. Fails on the first
    /// schema error.
    pub fn new(
        norms: Vec<(String, MinkowskiNorm)>,
        triangles: Vec<Triangle>,
        gluings: Vec<EdgeGlue>,
    ) -> Result<Self, SurfaceError> {
        let mut norm_index = BTreeMap::new();
        for (i, (id, _)) in norms.iter().enumerate() {
            if norm_index.insert(id.clone(), i).is_some() {
                return Err(SurfaceError::DuplicateNorm(id.clone()));
            }
        }
        let mut tri_index = BTreeMap::new();
        let mut face_norm = Vec::with_capacity(triangles.len());
        for (i, t) in triangles.iter().enumerate() {
            if tri_index.insert(t.id, i).is_some() {
                return Err(SurfaceError::DuplicateTriangle(t.id));
            }
            if t.chart.iter().any(|p| !p.is_finite()) {
                return Err(SurfaceError::NonFinite("triangle chart"));
            }
            let scale = (t.chart[1] - t.chart[0])
                .length()
                .max((t.chart[2] - t.chart[0]).length());
            if math::abs(t.signed_area2()) <= 1e-14 * scale * scale {
                return Err(SurfaceError::DegenerateTriangle(t.id));
            }
            match norm_index.get(&t.norm) {
                Some(&n) => face_norm.push(n),
                None => {
                    return Err(SurfaceError::DanglingNorm {
                        triangle: t.id,
                        norm: t.norm.clone(),
                    })
                }
            }
        }

        let mut links: Vec<[Option<EdgeLink>; 3]> = vec![[None; 3]; triangles.len()];
        for (gi, g) in gluings.iter().enumerate() {
            let resolve = |(tid, e): (i64, usize)| -> Result<(usize, usize), SurfaceError> {
                let f = *tri_index.get(&tid).ok_or(SurfaceError::DanglingTriangle(tid))?;
                if e > 2 {
                    return Err(SurfaceError::EdgeIndex { triangle: tid, edge: e });
                }
                Ok((f, e))
            };
            let (fa, ea) = resolve(g.a)?;
            let (fb, eb) = resolve(g.b)?;
            if (fa, ea) == (fb, eb) {
                return Err(SurfaceError::SelfGluing {
                    triangle: g.a.0,
                    edge: ea,
                });
            }
            for (f, e, tid) in [(fa, ea, g.a.0), (fb, eb, g.b.0)] {
                if links[f][e].is_some() {
                    return Err(SurfaceError::DuplicateGluing { triangle: tid, edge: e });
                }
            }
            links[fa][ea] = Some(EdgeLink {
                face: fb,
                edge: eb,
                reversed: g.reversed,
                gluing: gi,
            });
            links[fb][eb] = Some(EdgeLink {
                face: fa,
                edge: ea,
                reversed: g.reversed,
                gluing: gi,
            });
        }

        let mut s = Surface {
            norms,
            triangles,
            gluings,
            face_norm,
            links,
            vertices: Vec::new(),
            corner_vertex: Vec::new(),
        };
        s.derive_vertices()?;
        Ok(s)
    }

    /// The corner of `link.face` identified with local vertex `corner` of
    /// `face`, where `corner` is an endpoint of the linked edge.
    fn glued_corner(&self, face: usize, edge: usize, corner: usize) -> (usize, usize) {
        let link = self.links[face][edge].expect("glued edge");
        let first = corner == edge;
        let j = link.edge;
        let c = match (first, link.reversed) {
            (true, false) | (false, true) => j,
            (true, true) | (false, false) => (j + 1) % 3,
        };
        (link.face, c)
    }

    fn derive_vertices(&mut self) -> Result<(), SurfaceError> {
        let nf = self.triangles.len();
        let mut assigned = vec![[usize::MAX; 3]; nf];
        let mut vertices = Vec::new();
        for f0 in 0..nf {
            for c0 in 0..3 {
                if assigned[f0][c0] != usize::MAX {
                    continue;
                }
                let vid = vertices.len();
                let (corners, boundary) = self.walk_star(f0, c0);
                for sc in &corners {
                    if assigned[sc.face][sc.corner] != usize::MAX {
                        return Err(SurfaceError::NonManifoldVertex(
                            self.triangles[f0].labels[c0].clone(),
                        ));
                    }
                    assigned[sc.face][sc.corner] = vid;
                }
                vertices.push(Vertex {
                    label: self.triangles[f0].labels[c0].clone(),
                    corners,
                    boundary,
                });
            }
        }
        // corners reached through a different orbit would have tripped the
        // check above; a second pass catches gluings that merge two fans
        for (f, row) in assigned.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                for e in [c, (c + 2) % 3] {
                    if self.links[f][e].is_some() {
                        let (g, d) = self.glued_corner(f, e, c);
                        if assigned[g][d] != v {
                            return Err(SurfaceError::NonManifoldVertex(
                                self.triangles[f].labels[c].clone(),
                            ));
                        }
                    }
                }
            }
        }
        self.vertices = vertices;
        self.corner_vertex = assigned;
        Ok(())
    }

    /// Walks around the corner `(f0, c0)` across gluings. Returns the corners
    /// in cyclic order (or fan order starting at a boundary edge).
    fn walk_star(&self, f0: usize, c0: usize) -> (Vec<StarCorner>, bool) {
        let limit = 3 * self.triangles.len() + 1;
        let mut out = Vec::new();
        let (mut f, mut c, mut entry) = (f0, c0, (c0 + 2) % 3);
        loop {
            let exit = if entry == c { (c + 2) % 3 } else { c };
            out.push(StarCorner {
                face: f,
                corner: c,
                entry_edge: entry,
                exit_edge: exit,
            });
            if self.links[f][exit].is_none() {
                break;
            }
            let (g, d) = self.glued_corner(f, exit, c);
            let link = self.links[f][exit].unwrap();
            if (g, d) == (f0, c0) {
                return (out, false);
            }
            if out.len() > limit {
                return (out, false);
            }
            f = g;
            c = d;
            entry = link.edge;
        }
        // hit a boundary going forward: restart from the other side of the fan
        let mut back = Vec::new();
        let (mut f, mut c, mut exit) = (f0, c0, out[0].entry_edge);
        while let Some(link) = self.links[f][exit] {
            let (g, d) = self.glued_corner(f, exit, c);
            let e_in = link.edge;
            let other = other_corner_edge(d, e_in);
            back.push(StarCorner {
                face: g,
                corner: d,
                entry_edge: other,
                exit_edge: e_in,
            });
            f = g;
            c = d;
            exit = other;
            if back.len() > limit {
                break;
            }
        }
        back.reverse();
        back.extend(out);
        (back, true)
    }

    pub fn norms(&self) -> &[(String, MinkowskiNorm)] {
        &self.norms
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn gluings(&self) -> &[EdgeGlue] {
        &self.gluings
    }

    pub fn face_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle(&self, face: usize) -> &Triangle {
        &self.triangles[face]
    }

    pub fn norm_of(&self, face: usize) -> &MinkowskiNorm {
        &self.norms[self.face_norm[face]].1
    }

    pub fn norm_index(&self, face: usize) -> usize {
        self.face_norm[face]
    }

    pub fn face_index(&self, id: i64) -> Option<usize> {
        self.triangles.iter().position(|t| t.id == id)
    }

    pub fn link(&self, face: usize, edge: usize) -> Option<EdgeLink> {
        self.links[face][edge]
    }

    /// Sides of gluing `g` as `(face, edge)` pairs.
    pub fn gluing_sides(&self, g: usize) -> ((usize, usize), (usize, usize)) {
        let gl = &self.gluings[g];
        let fa = self.face_index(gl.a.0).expect("resolved at construction");
        let fb = self.face_index(gl.b.0).expect("resolved at construction");
        ((fa, gl.a.1), (fb, gl.b.1))
    }

    /// Maps a point at parameter `t` along edge `edge` of `face` to the far
    /// side: returns `(face', edge', t')` with `t'` measured along edge'.
    pub fn map_edge_parameter(&self, face: usize, edge: usize, t: f64) -> Option<(usize, usize, f64)> {
        let l = self.links[face][edge]?;
        Some((l.face, l.edge, if l.reversed { 1.0 - t } else { t }))
    }

    /// Edge vector of `(face, edge)` and the vector it is identified with in
    /// the neighbour's chart.
    pub fn matched_edge_vectors(&self, face: usize, edge: usize) -> Option<(Vec2, Vec2)> {
        let l = self.links[face][edge]?;
        let ea = self.triangles[face].edge_vector(edge);
        let eb = self.triangles[l.face].edge_vector(l.edge);
        Some((ea, if l.reversed { -eb } else { eb }))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_of_corner(&self, face: usize, corner: usize) -> usize {
        self.corner_vertex[face][corner]
    }

    pub fn vertex_by_label(&self, label: &str) -> Result<usize, SurfaceError> {
        self.vertices
            .iter()
            .position(|v| v.label == label)
            .ok_or_else(|| SurfaceError::UnknownVertex(label.to_string()))
    }

    /// Cyclically ordered corners around an interior vertex.
    pub fn vertex_star(&self, vertex: usize) -> Result<&[StarCorner], SurfaceError> {
        let v = &self.vertices[vertex];
        if v.boundary {
            return Err(SurfaceError::BoundaryVertex(v.label.clone()));
        }
        Ok(&v.corners)
    }

    pub fn boundary_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (f, row) in self.links.iter().enumerate() {
            for (e, l) in row.iter().enumerate() {
                if l.is_none() {
                    out.push((f, e));
                }
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.links.iter().all(|r| r.iter().all(|l| l.is_some()))
    }

    pub fn require_closed(&self) -> Result<(), SurfaceError> {
        let n = self.boundary_edges().len();
        if n == 0 {
            Ok(())
        } else {
            Err(SurfaceError::NotClosed { boundary_edges: n })
        }
    }

    pub fn edge_count(&self) -> usize {
        self.gluings.len() + self.boundary_edges().len()
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.triangles.len() as i64
    }

    /// The same number assembled vertex by vertex: each vertex contributes
    /// `1 - (edge ends)/2 + (corners)/3`. Returns the value times 6 to stay integral.
    pub fn euler_characteristic_local6(&self) -> i64 {
        let mut ends = vec![0i64; self.vertices.len()];
        for f in 0..self.triangles.len() {
            for e in 0..3 {
                let va = self.corner_vertex[f][e];
                let vb = self.corner_vertex[f][(e + 1) % 3];
                // a glued edge is seen from both sides
                let w = if self.links[f][e].is_some() { 1 } else { 2 };
                ends[va] += w;
                ends[vb] += w;
            }
        }
        let mut total = 0;
        for (v, vert) in self.vertices.iter().enumerate() {
            // ends[v] counts each edge end twice
            total += 6 - 3 * ends[v] / 2 + 2 * vert.corners.len() as i64;
        }
        total
    }

    /// Connected components of the face adjacency graph, as lists of faces.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.triangles.len();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut stack = vec![s];
            seen[s] = true;
            let mut comp = Vec::new();
            while let Some(f) = stack.pop() {
                comp.push(f);
                for l in self.links[f].iter().flatten() {
                    if !seen[l.face] {
                        seen[l.face] = true;
                        stack.push(l.face);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Runs all structural and metric checks.
    pub fn validate(&self, samples: usize) -> ValidationReport {
        self.validate_with(samples, EDGE_COMPAT_TOL)
    }

    /// [`Surface::validate`] with an explicit relative edge-compatibility tolerance.
    pub fn validate_with(&self, samples: usize, edge_tol: f64) -> ValidationReport {
        let mut rep = ValidationReport::new();

        let mut worst = 0.0f64;
        let mut worst_at = String::new();
        for g in 0..self.gluings.len() {
            let ((fa, ea), (fb, _)) = self.gluing_sides(g);
            let (va, vb) = self.matched_edge_vectors(fa, ea).unwrap();
            let (na, nb) = (self.norm_of(fa), self.norm_of(fb));
            for s in [1.0, -1.0] {
                let la = na.eval(va * s);
                let lb = nb.eval(vb * s);
                let rel = math::abs(la - lb) / la.max(lb).max(f64::MIN_POSITIVE);
                let rel = if rel.is_finite() { rel } else { f64::INFINITY };
                if rel > worst {
                    worst = rel;
                    worst_at = format!(
                        "gluing {g} (triangle {} edge {}, {} side): {la:.12} vs {lb:.12}",
                        self.triangles[fa].id,
                        ea,
                        if s > 0.0 { "forward" } else { "backward" }
                    );
                }
            }
        }
        rep.push(
            "edge-compatibility",
            worst <= edge_tol,
            worst,
            if self.gluings.is_empty() {
                "no glued edges".to_string()
            } else if worst_at.is_empty() {
                format!("edge lengths agree exactly on {} glued edges", self.gluings.len())
            } else {
                format!("worst relative mismatch {worst:.3e} at {worst_at}")
            },
        );

        // walk_star already enforces a single fan; this reports what it found
        let boundary: Vec<&str> = self
            .vertices
            .iter()
            .filter(|v| v.boundary)
            .map(|v| v.label.as_str())
            .collect();
        rep.push(
            "vertex-star-fan",
            true,
            0.0,
            format!(
                "{} vertices, {} on the boundary",
                self.vertices.len(),
                boundary.len()
            ),
        );

        let mut low = Vec::new();
        let mut min_deg = usize::MAX;
        for v in self.vertices.iter().filter(|v| !v.boundary) {
            min_deg = min_deg.min(v.corners.len());
            if v.corners.len() < 3 {
                low.push(format!("{} ({})", v.label, v.corners.len()));
            }
        }
        rep.push(
            "minimum-degree",
            low.is_empty(),
            if min_deg == usize::MAX { 0.0 } else { min_deg as f64 },
            if low.is_empty() {
                "every interior vertex has at least 3 corners".to_string()
            } else {
                format!("vertices with fewer than 3 corners: {}", low.join(", "))
            },
        );

        let mut clash = Vec::new();
        for v in &self.vertices {
            for sc in &v.corners {
                let l = &self.triangles[sc.face].labels[sc.corner];
                if *l != v.label {
                    clash.push(format!("{} vs {}", v.label, l));
                }
            }
        }
        let mut labels: Vec<&str> = self.vertices.iter().map(|v| v.label.as_str()).collect();
        labels.sort_unstable();
        let distinct = labels.windows(2).all(|w| w[0] != w[1]);
        if !distinct {
            clash.push("two vertices share a label".to_string());
        }
        rep.push(
            "vertex-labels",
            clash.is_empty(),
            clash.len() as f64,
            if clash.is_empty() {
                "labels agree with the glued corners".to_string()
            } else {
                clash.join("; ")
            },
        );

        for (id, n) in &self.norms {
            rep.extend_prefixed(&format!("norm[{id}]:"), n.validate(samples));
        }
        rep
    }

    /// A copy of the surface with one norm replaced.
    pub fn with_norm(&self, id: &str, norm: MinkowskiNorm) -> Result<Surface, SurfaceError> {
        let mut norms = self.norms.clone();
        match norms.iter_mut().find(|(n, _)| n == id) {
            Some(slot) => slot.1 = norm,
            None => {
                return Err(SurfaceError::DanglingNorm {
                    triangle: -1,
                    norm: id.to_string(),
                })
            }
        }
        Surface::new(norms, self.triangles.clone(), self.gluings.clone())
    }

    /// A copy with one face assigned a (possibly new) norm.
    pub fn with_face_norm(&self, face: usize, id: &str, norm: MinkowskiNorm) -> Result<Surface, SurfaceError> {
        let mut norms = self.norms.clone();
        match norms.iter_mut().find(|(n, _)| n == id) {
            Some(slot) => slot.1 = norm,
            None => norms.push((id.to_string(), norm)),
        }
        let mut tris = self.triangles.clone();
        tris[face].norm = id.to_string();
        Surface::new(norms, tris, self.gluings.clone())
    }

    /// Splits `face` into three triangles around the chart point `p`
    /// (strictly inside the face), which becomes a new vertex `label`.
    pub fn split_face(&self, face: usize, p: Vec2, label: &str) -> Result<Surface, SurfaceError> {
        let t = self.triangles.get(face).ok_or(SurfaceError::SplitOutside)?;
        let o = t.signed_area2();
        let inside = (0..3).all(|k| o * t.edge_vector(k).cross(p - t.chart[k]) > 0.0);
        if !p.is_finite() || !inside {
            return Err(SurfaceError::SplitOutside);
        }
        let next_id = self.triangles.iter().map(|t| t.id).max().unwrap_or(0) + 1;
        let ids = [t.id, next_id, next_id + 1];
        // sub-triangle k keeps edge k of the original as its edge 0
        let mut tris = self.triangles.clone();
        for k in 0..3 {
            let sub = Triangle {
                id: ids[k],
                chart: [t.chart[k], t.chart[(k + 1) % 3], p],
                norm: t.norm.clone(),
                labels: [
                    t.labels[k].clone(),
                    t.labels[(k + 1) % 3].clone(),
                    label.to_string(),
                ],
            };
            if k == 0 {
                tris[face] = sub;
            } else {
                tris.push(sub);
            }
        }
        let mut gluings = Vec::new();
        for g in &self.gluings {
            let mut g = *g;
            if g.a.0 == t.id {
                g.a = (ids[g.a.1], 0);
            }
            if g.b.0 == t.id {
                g.b = (ids[g.b.1], 0);
            }
            gluings.push(g);
        }
        // sub k edge 1 runs (k+1) -> p, sub k+1 edge 2 runs p -> (k+1)
        for k in 0..3 {
            gluings.push(EdgeGlue {
                a: (ids[k], 1),
                b: (ids[(k + 1) % 3], 2),
                reversed: true,
            });
        }
        Surface::new(self.norms.clone(), tris, gluings)
    }
}

/// The edge at `corner` that is not `edge`.
fn other_corner_edge(corner: usize, edge: usize) -> usize {
    if edge == corner {
        (corner + 2) % 3
    } else {
        corner
    }
}
