//! Polyline drawings in the plane or the fundamental square of the torus,
//! their exact verification, JSON form and SVG rendering.
//!
//! A torus edge is a list of pieces inside `[-1,1]^2`; each piece but the
//! last leaves the square at a side point and the next piece re-enters at
//! the identified point of the opposite side.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{angle_cmp, on_segment, parse_q, segment_meet, sub, Meet, Point, Q};
use crate::graph::{EdgeId, MultiGraph, VertexId};
use crate::rotation::{trace_faces, Dart, EmbeddingReport, RotationSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Surface {
    Plane,
    Torus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrawnEdge {
    pub id: EdgeId,
    pub ends: [VertexId; 2],
    /// One piece in the plane; pieces separated by side crossings on the torus.
    pub pieces: Vec<Vec<Point>>,
}

impl DrawnEdge {
    pub fn polyline(&self) -> Vec<Point> {
        self.pieces.concat()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub vertices: Vec<VertexId>,
    pub face: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Drawing {
    pub surface: Surface,
    pub graph: MultiGraph,
    pub points: Vec<Point>,
    /// Aligned with the graph's edge indices.
    pub edges: Vec<DrawnEdge>,
    /// Vertex involution realised by `(x, y) -> (-x, y)`, if any.
    pub mirror: Option<Vec<VertexId>>,
    pub certificates: Vec<Certificate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EndKind {
    Vertex(VertexId),
    Joint,
    Side,
}

#[derive(Debug, Clone, Copy)]
struct Seg {
    edge: usize,
    piece: usize,
    index: usize,
    a: Point,
    b: Point,
    ka: EndKind,
    kb: EndKind,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidDrawing(msg.into())
}

fn on_side(p: Point) -> bool {
    p.x.abs() == Q::one() || p.y.abs() == Q::one()
}

fn inside_open(p: Point) -> bool {
    p.x.abs() < Q::one() && p.y.abs() < Q::one()
}

/// Whether side point `exit` is glued to side point `entry`.
fn identified(exit: Point, entry: Point) -> bool {
    let one = Q::one();
    let corner = |p: Point| p.x.abs() == one && p.y.abs() == one;
    if corner(exit) || corner(entry) {
        return false;
    }
    (exit.x.abs() == one && entry.x == -exit.x && entry.y == exit.y)
        || (exit.y.abs() == one && entry.y == -exit.y && entry.x == exit.x)
}

impl Drawing {
    /// Rotation system read off the drawing: darts at each vertex in
    /// counter-clockwise order of their first segment.
    pub fn rotation_system(&self) -> Result<RotationSystem> {
        let g = &self.graph;
        let mut at: Vec<Vec<(Dart, (Q, Q))>> = vec![Vec::new(); g.vertex_count()];
        for (i, e) in self.edges.iter().enumerate() {
            let first = e.pieces.first().ok_or_else(|| invalid(format!("edge {} has no polyline", e.id)))?;
            let last = e.pieces.last().expect("nonempty");
            if first.len() < 2 || last.len() < 2 {
                return Err(invalid(format!("edge {} has a degenerate piece", e.id)));
            }
            at[e.ends[0]].push((2 * i, sub(first[1], first[0])));
            let n = last.len();
            at[e.ends[1]].push((2 * i + 1, sub(last[n - 2], last[n - 1])));
        }
        let rotation = at
            .into_iter()
            .map(|mut ds| {
                ds.sort_by(|a, b| angle_cmp(a.1, b.1));
                ds.into_iter().map(|(d, _)| d).collect()
            })
            .collect();
        RotationSystem::new(g.clone(), rotation)
    }

    /// Finds, for each vertex set, a traced face containing it and stores the
    /// certificates.
    pub fn certify(&mut self, sets: &[Vec<VertexId>]) -> Result<()> {
        let report = trace_faces(&self.rotation_system()?);
        let mut certs = Vec::with_capacity(sets.len());
        for set in sets {
            let face = report
                .face_containing(set)
                .ok_or_else(|| Error::Certificate(format!("no face contains all of {set:?}")))?;
            certs.push(Certificate {
                vertices: set.clone(),
                face,
            });
        }
        self.certificates = certs;
        Ok(())
    }

    fn segments(&self) -> Result<Vec<Seg>> {
        let mut segs = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let pieces = e.pieces.len();
            if self.surface == Surface::Plane && pieces != 1 {
                return Err(invalid(format!("plane edge {} has {pieces} pieces", e.id)));
            }
            for (k, piece) in e.pieces.iter().enumerate() {
                if piece.len() < 2 {
                    return Err(invalid(format!("edge {} has a piece with fewer than two points", e.id)));
                }
                for j in 0..piece.len() - 1 {
                    let (a, b) = (piece[j], piece[j + 1]);
                    if a == b {
                        return Err(invalid(format!("edge {} has a zero-length segment", e.id)));
                    }
                    let kind = |pos: usize| {
                        if pos == 0 && k == 0 {
                            EndKind::Vertex(e.ends[0])
                        } else if pos == piece.len() - 1 && k == pieces - 1 {
                            EndKind::Vertex(e.ends[1])
                        } else if pos == 0 || pos == piece.len() - 1 {
                            EndKind::Side
                        } else {
                            EndKind::Joint
                        }
                    };
                    segs.push(Seg {
                        edge: i,
                        piece: k,
                        index: j,
                        a,
                        b,
                        ka: kind(j),
                        kb: kind(j + 1),
                    });
                }
            }
        }
        Ok(segs)
    }

    fn check_structure(&self) -> Result<()> {
        let g = &self.graph;
        if self.points.len() != g.vertex_count() || self.edges.len() != g.edge_count() {
            return Err(invalid("vertex or edge count does not match the graph"));
        }
        let distinct: BTreeSet<_> = self.points.iter().collect();
        if distinct.len() != self.points.len() {
            return Err(invalid("two vertices share a point"));
        }
        for (i, e) in self.edges.iter().enumerate() {
            let ge = g.edge(i);
            if ge.id != e.id || ge.ends != e.ends {
                return Err(invalid(format!("edge record {} does not match the graph", e.id)));
            }
            let start = e.pieces.first().and_then(|p| p.first());
            let end = e.pieces.last().and_then(|p| p.last());
            if start != Some(&self.points[e.ends[0]]) || end != Some(&self.points[e.ends[1]]) {
                return Err(invalid(format!("edge {} does not end at its vertices", e.id)));
            }
            if self.surface == Surface::Torus {
                for w in e.pieces.windows(2) {
                    let (exit, entry) = (*w[0].last().unwrap(), w[1][0]);
                    if !identified(exit, entry) {
                        return Err(invalid(format!("edge {} re-enters at {entry}, not glued to {exit}", e.id)));
                    }
                }
                for (k, piece) in e.pieces.iter().enumerate() {
                    for (j, &p) in piece.iter().enumerate() {
                        let end_of_piece = (j == 0 && k > 0) || (j == piece.len() - 1 && k + 1 < e.pieces.len());
                        let ok = if end_of_piece { on_side(p) } else { inside_open(p) };
                        if !ok {
                            return Err(invalid(format!("edge {} has point {p} misplaced in the square", e.id)));
                        }
                    }
                }
            }
        }
        if self.surface == Surface::Torus {
            if let Some(p) = self.points.iter().find(|&&p| !inside_open(p)) {
                return Err(invalid(format!("vertex at {p} is not inside the open square")));
            }
            // each glued side point is used by exactly one crossing
            let mut seen = BTreeSet::new();
            for e in &self.edges {
                for w in e.pieces.windows(2) {
                    let exit = *w[0].last().unwrap();
                    let canon = if exit.x == Q::one() || exit.y == Q::one() { w[1][0] } else { exit };
                    if !seen.insert(canon) {
                        return Err(invalid(format!("two crossings share the side point {canon}")));
                    }
                }
            }
        }
        if let Some(m) = &self.mirror {
            self.check_mirror(m)?;
        }
        Ok(())
    }

    fn check_mirror(&self, m: &[VertexId]) -> Result<()> {
        let n = self.points.len();
        if m.len() != n || m.iter().enumerate().any(|(v, &w)| w >= n || m[w] != v) {
            return Err(invalid("mirror map is not a vertex involution"));
        }
        for v in 0..n {
            if self.points[m[v]] != self.points[v].mirror() {
                return Err(invalid(format!("vertex {v} is not mirrored onto vertex {}", m[v])));
            }
        }
        let canonical = |line: Vec<Point>| {
            let rev: Vec<Point> = line.iter().rev().copied().collect();
            line.min(rev)
        };
        let mut lines: HashMap<Vec<Point>, usize> = HashMap::new();
        for e in &self.edges {
            *lines.entry(canonical(e.polyline())).or_default() += 1;
        }
        for (line, count) in &lines {
            let image = canonical(line.iter().map(|p| p.mirror()).collect());
            if lines.get(&image) != Some(count) {
                return Err(invalid("edge polylines are not mirror symmetric"));
            }
        }
        Ok(())
    }

    fn check_crossings(&self) -> Result<()> {
        let segs = self.segments()?;
        let id = |s: &Seg| self.edges[s.edge].id;
        for (i, s) in segs.iter().enumerate() {
            for t in &segs[i + 1..] {
                match segment_meet(s.a, s.b, t.a, t.b) {
                    Meet::None => {}
                    Meet::Overlap => return Err(Error::Crossing(id(s), id(t))),
                    Meet::Point(p) => {
                        let kind = |x: &Seg| {
                            if p == x.a {
                                Some(x.ka)
                            } else if p == x.b {
                                Some(x.kb)
                            } else {
                                None
                            }
                        };
                        let allowed = match (kind(s), kind(t)) {
                            (Some(EndKind::Vertex(u)), Some(EndKind::Vertex(v))) => u == v,
                            (Some(EndKind::Joint), Some(EndKind::Joint)) => {
                                s.edge == t.edge && s.piece == t.piece && s.index + 1 == t.index && p == s.b
                            }
                            _ => false,
                        };
                        if !allowed {
                            return Err(Error::Crossing(id(s), id(t)));
                        }
                    }
                }
            }
        }
        for (v, &p) in self.points.iter().enumerate() {
            for s in &segs {
                let touches = (s.a == p && s.ka == EndKind::Vertex(v)) || (s.b == p && s.kb == EndKind::Vertex(v));
                if !touches && on_segment(s.a, s.b, p) {
                    return Err(invalid(format!("vertex {v} lies on edge {}", id(s))));
                }
            }
        }
        Ok(())
    }
}

/// Checks the drawing exactly and returns the traced embedding.
pub fn verify_drawing(d: &Drawing) -> Result<EmbeddingReport> {
    d.check_structure()?;
    d.check_crossings()?;
    if !d.graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let report = trace_faces(&d.rotation_system()?);
    let limit = match d.surface {
        Surface::Plane => 0,
        Surface::Torus => 1,
    };
    if report.orientable_genus > limit {
        return Err(invalid(format!(
            "traced genus {} exceeds the surface genus {limit}",
            report.orientable_genus
        )));
    }
    for c in &d.certificates {
        let ok = c.face < report.faces.len() && {
            let vs = report.face_vertices(c.face);
            c.vertices.iter().all(|v| vs.binary_search(v).is_ok())
        };
        if !ok {
            return Err(Error::Certificate(format!(
                "face {} does not contain {:?}",
                c.face, c.vertices
            )));
        }
    }
    Ok(report)
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: VertexId,
    x: String,
    y: String,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: EdgeId,
    ends: [VertexId; 2],
    polyline: Vec<Point>,
    segments_on_torus: Option<Vec<Vec<Point>>>,
}

#[derive(Serialize, Deserialize)]
struct SymmetryJson {
    mirror: Vec<VertexId>,
}

#[derive(Serialize, Deserialize)]
struct DrawingJson {
    surface: Surface,
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
    symmetry: Option<SymmetryJson>,
    certificates: Vec<Certificate>,
}

impl Drawing {
    pub fn to_json(&self) -> String {
        let doc = DrawingJson {
            surface: self.surface,
            vertices: self
                .points
                .iter()
                .enumerate()
                .map(|(id, p)| VertexJson {
                    id,
                    x: p.x.to_string(),
                    y: p.y.to_string(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.id,
                    ends: e.ends,
                    polyline: e.polyline(),
                    segments_on_torus: (self.surface == Surface::Torus).then(|| e.pieces.clone()),
                })
                .collect(),
            symmetry: self.mirror.clone().map(|mirror| SymmetryJson { mirror }),
            certificates: self.certificates.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("drawing serializes")
    }

    pub fn from_json(text: &str) -> Result<Drawing> {
        let doc: DrawingJson = serde_json::from_str(text).map_err(|e| invalid(format!("bad drawing JSON: {e}")))?;
        let mut points = Vec::with_capacity(doc.vertices.len());
        for (i, v) in doc.vertices.iter().enumerate() {
            if v.id != i {
                return Err(invalid("vertex ids must be 0..n in order"));
            }
            let x = parse_q(&v.x).ok_or_else(|| invalid(format!("bad coordinate `{}`", v.x)))?;
            let y = parse_q(&v.y).ok_or_else(|| invalid(format!("bad coordinate `{}`", v.y)))?;
            points.push(Point::new(x, y));
        }
        let ends: Vec<_> = doc.edges.iter().map(|e| (e.id, e.ends)).collect();
        let graph = MultiGraph::from_id_edges(points.len(), &ends)?;
        let edges = doc
            .edges
            .into_iter()
            .map(|e| DrawnEdge {
                id: e.id,
                ends: e.ends,
                pieces: match doc.surface {
                    Surface::Plane => vec![e.polyline],
                    Surface::Torus => e.segments_on_torus.unwrap_or_else(|| vec![e.polyline]),
                },
            })
            .collect();
        Ok(Drawing {
            surface: doc.surface,
            graph,
            points,
            edges,
            mirror: doc.symmetry.map(|s| s.mirror),
            certificates: doc.certificates,
        })
    }

    pub fn to_svg(&self) -> String {
        let all: Vec<(f64, f64)> = self
            .points
            .iter()
            .chain(self.edges.iter().flat_map(|e| e.pieces.iter().flatten()))
            .map(|p| p.to_f64())
            .collect();
        let (mut x0, mut x1, mut y0, mut y1) = (-1.0f64, 1.0f64, -1.0f64, 1.0f64);
        if self.surface == Surface::Plane {
            for &(x, y) in &all {
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        }
        let size = 640.0;
        let margin = 24.0;
        let scale = (size - 2.0 * margin) / (x1 - x0).max(y1 - y0).max(1e-9);
        let tx = |x: f64| margin + (x - x0) * scale;
        let ty = |y: f64| margin + (y1 - y) * scale;
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
        )
        .unwrap();
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        if self.surface == Surface::Torus {
            writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="gray" stroke-dasharray="6 4"/>"#,
                tx(-1.0),
                ty(1.0),
                2.0 * scale,
                2.0 * scale
            )
            .unwrap();
        }
        for e in &self.edges {
            for piece in &e.pieces {
                let pts: Vec<String> = piece
                    .iter()
                    .map(|p| {
                        let (x, y) = p.to_f64();
                        format!("{:.2},{:.2}", tx(x), ty(y))
                    })
                    .collect();
                writeln!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="black" stroke-width="1.5"><title>{}</title></polyline>"#,
                    pts.join(" "),
                    e.id
                )
                .unwrap();
            }
        }
        for (v, p) in self.points.iter().enumerate() {
            let (x, y) = p.to_f64();
            writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="steelblue"/><text x="{:.2}" y="{:.2}" font-size="11">{v}</text>"#,
                tx(x),
                ty(y),
                tx(x) + 5.0,
                ty(y) - 5.0
            )
            .unwrap();
        }
        out.push_str("</svg>\n");
        out
    }

    /// Plane drawing with straight edges between the given points.
    pub fn straight(graph: &MultiGraph, points: Vec<Point>) -> Drawing {
        let edges = graph
            .edges()
            .iter()
            .map(|e| DrawnEdge {
                id: e.id,
                ends: e.ends,
                pieces: vec![vec![points[e.ends[0]], points[e.ends[1]]]],
            })
            .collect();
        Drawing {
            surface: Surface::Plane,
            graph: graph.clone(),
            points,
            edges,
            mirror: None,
            certificates: Vec::new(),
        }
    }
}
