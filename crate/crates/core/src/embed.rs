//! Symmetric planar embeddings of hyperelliptic graphs.
//!
//! The quotient tree is rooted and drawn in the half-plane `x <= 0`: fixed
//! vertices on the axis, each exchanged pair as a left copy and its mirror
//! image. Every node occupies its own row (depth-first preorder from the top);
//! a node with `k` children routes the edge to its `i`-th child down a private
//! column left of everything the earlier children use. Horizontal edges
//! `a - iota(a)` are drawn through a point on the axis below their pair, as if
//! subdivided. Mirroring the left half gives the whole drawing.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::drawing::{Drawing, DrawnEdge, Surface};
use crate::error::{Error, Result};
use crate::geometry::{q, qi, Point};
use crate::graph::{betti_genus, EdgeId, MultiGraph, VertexId};
use crate::involution::Involution;
use crate::morphism::EdgeImage;

/// One pivot of the recursive construction: the pivot orbit, the
/// components hanging below it, and how each attaches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductiveFrame {
    pub level: usize,
    /// `[a, iota(a)]` with `a` drawn on the left, or `[f]` for a fixed pivot.
    pub pivot: Vec<VertexId>,
    /// Vertex sets of the components; empty for a horizontal edge, which
    /// stands for its subdivision point.
    pub components: Vec<Vec<VertexId>>,
    /// 0 when the component attaches at a fixed vertex, 1 at an exchanged pair.
    pub psi: Vec<u8>,
    /// Whether the component is drawn with its pair labels exchanged
    /// relative to the smaller-id convention.
    pub flips: Vec<bool>,
    pub attach_edges: Vec<Vec<EdgeId>>,
}

/// Vertex sets that must share a face.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FaceConstraint {
    pub sets: Vec<Vec<VertexId>>,
}

#[derive(Debug, Clone)]
pub struct HyperellipticEmbedding {
    pub drawing: Drawing,
    pub frames: Vec<InductiveFrame>,
    pub constraint: FaceConstraint,
    /// One line per pivot.
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    Orbit(usize),
    /// Horizontal edge, by edge index.
    Horizontal(usize),
}

/// Integer layout of a hyperelliptic graph; `y` is in half-row units.
#[derive(Debug, Clone)]
pub(crate) struct TreeLayout {
    pub points: Vec<Point>,
    pub lines: Vec<Vec<Point>>,
    pub frames: Vec<InductiveFrame>,
    pub trace: Vec<String>,
    /// Strict bound on `|x|`.
    pub width: i128,
    /// Number of rows; `y` ranges over `[-(2 rows - 2), 0]`.
    pub rows: i128,
    /// Left copy (or the fixed vertex) of each orbit.
    pub left: Vec<VertexId>,
    /// Per orbit, how far left its subtree reaches.
    pub reach: Vec<i128>,
}

pub(crate) fn check_witness(g: &MultiGraph, iota: &Involution) -> Result<()> {
    if iota.graph() != g {
        return Err(Error::InvalidInvolution("involution belongs to a different graph".into()));
    }
    if let Some(e) = g.edges().iter().find(|e| e.is_loop()) {
        return Err(Error::LoopEdge(e.id));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Lays out `g` around the tree quotient of `iota`, rooted at orbit `root`.
/// With `chain`, the path from the root to that orbit is made of last
/// children, which keeps it on the outer face. `root_left` picks the root
/// copy drawn on the left.
pub(crate) fn layout(
    g: &MultiGraph,
    iota: &Involution,
    root: usize,
    chain: Option<usize>,
    root_left: Option<VertexId>,
) -> Result<TreeLayout> {
    check_witness(g, iota)?;
    let qr = iota.quotient()?;
    let tree = &qr.quotient;
    if !betti_genus(tree).is_tree {
        return Err(Error::InvalidInvolution("quotient is not a tree".into()));
    }
    let orbit = qr.projection.vertex_map().to_vec();
    let n_orbits = tree.vertex_count();
    if root >= n_orbits {
        return Err(Error::MissingVertex(root));
    }
    let mut members: Vec<Vec<VertexId>> = vec![Vec::new(); n_orbits];
    for v in g.vertices() {
        members[orbit[v]].push(v);
    }
    let is_pair = |o: usize| members[o].len() == 2;

    // G edges over each tree edge, and horizontal edges per orbit
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); tree.edge_count()];
    let mut horizontal: Vec<Vec<usize>> = vec![Vec::new(); n_orbits];
    for (i, img) in qr.projection.edge_map().iter().enumerate() {
        match *img {
            EdgeImage::Edge(t) => over[t].push(i),
            EdgeImage::Vertex(o) => horizontal[o].push(i),
        }
    }

    // root the tree
    let tadj = tree.incidence();
    let mut parent = vec![usize::MAX; n_orbits];
    let mut parent_edge = vec![usize::MAX; n_orbits];
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n_orbits];
    let mut order = vec![root];
    let mut seen = vec![false; n_orbits];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        let mut nbrs: Vec<(usize, usize)> = tadj[x].iter().map(|&t| (tree.edge(t).other(x), t)).collect();
        nbrs.sort_unstable();
        for (y, t) in nbrs {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                parent_edge[y] = t;
                kids[x].push(y);
                order.push(y);
            }
        }
    }
    let mut children: Vec<Vec<Node>> = (0..n_orbits)
        .map(|o| {
            horizontal[o]
                .iter()
                .map(|&e| Node::Horizontal(e))
                .chain(kids[o].iter().map(|&c| Node::Orbit(c)))
                .collect()
        })
        .collect();
    if let Some(target) = chain {
        if target >= n_orbits {
            return Err(Error::MissingVertex(target));
        }
        let mut x = target;
        while x != root {
            let p = parent[x];
            let list = &mut children[p];
            let pos = list.iter().position(|&c| c == Node::Orbit(x)).expect("child listed");
            let c = list.remove(pos);
            list.push(c);
            x = p;
        }
    }

    // left copies
    let mut left = vec![usize::MAX; n_orbits];
    let mut flipped = vec![false; n_orbits];
    for &x in &order {
        let lo = members[x][0];
        if !is_pair(x) {
            left[x] = lo;
            continue;
        }
        left[x] = if x == root {
            match root_left {
                Some(v) if orbit[v] == root => v,
                Some(v) => return Err(Error::InvalidInput(format!("vertex {v} is not in the root orbit"))),
                None => lo,
            }
        } else if is_pair(parent[x]) {
            let lp = left[parent[x]];
            let e = over[parent_edge[x]]
                .iter()
                .map(|&i| g.edge(i))
                .find(|e| e.ends.contains(&lp))
                .ok_or_else(|| Error::Internal("tree edge has no lift at the left copy".into()))?;
            e.other(lp)
        } else {
            lo
        };
        flipped[x] = left[x] != lo;
    }

    // preorder rows, widths, columns
    let mut row: BTreeMap<NodeKey, i128> = BTreeMap::new();
    let mut pre = Vec::new();
    let mut stack = vec![Node::Orbit(root)];
    while let Some(node) = stack.pop() {
        row.insert(key(node), pre.len() as i128);
        pre.push(node);
        if let Node::Orbit(o) = node {
            stack.extend(children[o].iter().rev().copied());
        }
    }
    let mut width: BTreeMap<NodeKey, i128> = BTreeMap::new();
    let mut xpos: BTreeMap<NodeKey, i128> = BTreeMap::new();
    for &node in pre.iter().rev() {
        let (w, x) = match node {
            Node::Horizontal(_) => (0, 0),
            Node::Orbit(o) => {
                let k = children[o].len() as i128;
                let m = children[o].iter().map(|c| width[&key(*c)]).max().unwrap_or(0);
                if is_pair(o) {
                    (m + k + 1, -(m + k + 1))
                } else {
                    (m + k, 0)
                }
            }
        };
        width.insert(key(node), w);
        xpos.insert(key(node), x);
    }
    let y_of = |node: Node| -2 * row[&key(node)];
    let pt = |x: i128, y: i128| Point::new(qi(x), qi(y));

    let mut points = vec![Point::int(0, 0); g.vertex_count()];
    for o in 0..n_orbits {
        let p = pt(xpos[&key(Node::Orbit(o))], y_of(Node::Orbit(o)));
        points[left[o]] = p;
        if is_pair(o) {
            points[iota.apply(left[o])] = p.mirror();
        }
    }

    let mut lines: Vec<Vec<Point>> = vec![Vec::new(); g.edge_count()];
    let mut frames = Vec::new();
    let mut trace = Vec::new();
    let depth = {
        let mut d = vec![0usize; n_orbits];
        for &x in &order[1..] {
            d[x] = d[parent[x]] + 1;
        }
        d
    };
    for &p in &order {
        let node = Node::Orbit(p);
        let kids_here = &children[p];
        let m = kids_here.iter().map(|c| width[&key(*c)]).max().unwrap_or(0);
        let (xp, yp) = (xpos[&key(node)], y_of(node));
        let mut frame = InductiveFrame {
            level: depth[p],
            pivot: if is_pair(p) { vec![left[p], iota.apply(left[p])] } else { vec![left[p]] },
            components: Vec::new(),
            psi: Vec::new(),
            flips: Vec::new(),
            attach_edges: Vec::new(),
        };
        for (i, &child) in kids_here.iter().enumerate() {
            let col = -(m + i as i128 + 1);
            let yc = y_of(child);
            let head = [pt(xp, yp), pt(col, yp - 1), pt(col, yc)];
            match child {
                Node::Horizontal(e) => {
                    let mut line: Vec<Point> = head.to_vec();
                    line.push(pt(0, yc));
                    line.extend(head.iter().rev().map(|p| p.mirror()));
                    if g.ends(e)[0] != left[p] {
                        line.reverse();
                    }
                    lines[e] = line;
                    frame.components.push(Vec::new());
                    frame.psi.push(0);
                    frame.flips.push(false);
                    frame.attach_edges.push(vec![g.edge(e).id]);
                }
                Node::Orbit(c) => {
                    let lifts = &over[parent_edge[c]];
                    let target = pt(xpos[&key(child)], yc);
                    let left_edge = if is_pair(p) {
                        *lifts
                            .iter()
                            .find(|&&i| g.ends(i).contains(&left[p]))
                            .ok_or_else(|| Error::Internal("missing lift".into()))?
                    } else if is_pair(c) {
                        *lifts
                            .iter()
                            .find(|&&i| g.ends(i).contains(&left[c]))
                            .ok_or_else(|| Error::Internal("missing lift".into()))?
                    } else {
                        *lifts.iter().min().expect("tree edge has lifts")
                    };
                    for &i in lifts {
                        let mut line: Vec<Point> = head.to_vec();
                        line.push(target);
                        if i != left_edge {
                            line = line.into_iter().map(|p| p.mirror()).collect();
                        }
                        if line[0] != points[g.ends(i)[0]] {
                            line.reverse();
                        }
                        lines[i] = line;
                    }
                    let comp = subtree_vertices(c, &kids, &members);
                    validate_attach(g, iota, &frame.pivot, &comp, lifts)?;
                    frame.components.push(comp);
                    frame.psi.push(u8::from(is_pair(c)));
                    frame.flips.push(flipped[c]);
                    frame.attach_edges.push(lifts.iter().map(|&i| g.edge(i).id).collect());
                }
            }
        }
        if !frame.components.is_empty() {
            trace.push(format!(
                "level={} pivot={:?} psi={:?} flips={:?} inversions=0",
                frame.level,
                frame.pivot,
                frame.psi,
                frame.flips.iter().map(|&f| u8::from(f)).collect::<Vec<_>>()
            ));
            frames.push(frame);
        }
    }
    let w = xpos.values().map(|x| x.abs()).max().unwrap_or(0);
    let cols = children
        .iter()
        .map(|c| c.iter().map(|k| width[&key(*k)]).max().unwrap_or(0) + c.len() as i128)
        .max()
        .unwrap_or(0);
    Ok(TreeLayout {
        points,
        lines,
        frames,
        trace,
        width: w.max(cols) + 1,
        rows: pre.len() as i128,
        left,
        reach: (0..n_orbits).map(|o| width[&key(Node::Orbit(o))]).collect(),
    })
}

type NodeKey = (u8, usize);

fn key(n: Node) -> NodeKey {
    match n {
        Node::Orbit(o) => (0, o),
        Node::Horizontal(e) => (1, e),
    }
}

fn subtree_vertices(root: usize, kids: &[Vec<usize>], members: &[Vec<VertexId>]) -> Vec<VertexId> {
    let mut out = Vec::new();
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        out.extend(&members[x]);
        stack.extend(&kids[x]);
    }
    out.sort_unstable();
    out
}

/// Each component must receive exactly one edge from each copy of an
/// exchanged pivot, or exactly two from a fixed pivot.
fn validate_attach(
    g: &MultiGraph,
    iota: &Involution,
    pivot: &[VertexId],
    comp: &[VertexId],
    lifts: &[usize],
) -> Result<()> {
    let inside = |v: VertexId| comp.binary_search(&v).is_ok();
    let count = |p: VertexId| {
        g.edges()
            .iter()
            .filter(|e| (e.ends[0] == p && inside(e.ends[1])) || (e.ends[1] == p && inside(e.ends[0])))
            .count()
    };
    let expected = if pivot.len() == 2 { 1 } else { 2 };
    for &p in pivot {
        let c = count(p);
        if c != expected {
            return Err(Error::LemmaViolation(format!(
                "component {comp:?} receives {c} attaching edges from {p}, expected {expected}"
            )));
        }
    }
    if lifts.len() != 2 || iota.apply_edge(lifts[0]) != lifts[1] {
        return Err(Error::LemmaViolation("attaching edges are not one exchanged pair".into()));
    }
    Ok(())
}

impl TreeLayout {
    /// Affine map of layout coordinates into `(-1/2, 1/2)^2`.
    pub fn normalizer(&self) -> impl Fn(Point) -> Point {
        let sx = q(1, 2 * self.width);
        let shift = qi(self.rows - 1);
        let sy = q(1, 4 * self.rows);
        move |p: Point| Point::new(p.x * sx, (p.y + shift) * sy)
    }

    pub fn into_plane_drawing(self, g: &MultiGraph, mirror: Option<Vec<VertexId>>) -> Drawing {
        let norm = self.normalizer();
        let points: Vec<Point> = self.points.iter().map(|&p| norm(p)).collect();
        let edges = g
            .edges()
            .iter()
            .zip(&self.lines)
            .map(|(e, line)| DrawnEdge {
                id: e.id,
                ends: e.ends,
                pieces: vec![line.iter().map(|&p| norm(p)).collect()],
            })
            .collect();
        Drawing {
            surface: Surface::Plane,
            graph: g.clone(),
            points,
            edges,
            mirror,
            certificates: Vec::new(),
        }
    }
}

fn pair_sets(g: &MultiGraph, iota: &Involution) -> Vec<Vec<VertexId>> {
    g.vertices()
        .filter(|&v| iota.apply(v) > v)
        .map(|v| vec![v, iota.apply(v)])
        .collect()
}

/// Symmetric plane drawing of a hyperelliptic graph with a face certificate
/// for every exchanged pair.
pub fn embed_hyperelliptic(g: &MultiGraph, iota: &Involution) -> Result<HyperellipticEmbedding> {
    build(g, iota, 0, None, None, Vec::new())
}

/// As [`embed_hyperelliptic`], additionally certifying one face that contains
/// both orbits `set1` and `set2` (each an exchanged pair or a fixed vertex;
/// `set2` may also be a fixed vertex).
pub fn embed_with_two_pairs(
    g: &MultiGraph,
    iota: &Involution,
    set1: &[VertexId],
    set2: &[VertexId],
) -> Result<HyperellipticEmbedding> {
    let o1 = orbit_of(g, iota, set1)?;
    let o2 = orbit_of(g, iota, set2)?;
    let mut joint: Vec<VertexId> = set1.iter().chain(set2).copied().collect();
    joint.sort_unstable();
    joint.dedup();
    let qr = iota.quotient()?;
    let orbit = qr.projection.vertex_map();
    build(g, iota, orbit[o1], Some(orbit[o2]), None, vec![joint])
}

/// Validates that `set` is a whole orbit and returns one of its vertices.
fn orbit_of(g: &MultiGraph, iota: &Involution, set: &[VertexId]) -> Result<VertexId> {
    let &v = set.first().ok_or_else(|| Error::InvalidInput("empty vertex set".into()))?;
    if set.iter().any(|&x| x >= g.vertex_count()) {
        return Err(Error::MissingVertex(*set.iter().max().unwrap()));
    }
    let mut want = vec![v, iota.apply(v)];
    want.sort_unstable();
    want.dedup();
    let mut got = set.to_vec();
    got.sort_unstable();
    got.dedup();
    if got != want {
        return Err(Error::InvalidInput(format!("{set:?} is not an orbit of the involution")));
    }
    Ok(v)
}

fn build(
    g: &MultiGraph,
    iota: &Involution,
    root: usize,
    chain: Option<usize>,
    root_left: Option<VertexId>,
    extra: Vec<Vec<VertexId>>,
) -> Result<HyperellipticEmbedding> {
    let lay = layout(g, iota, root, chain, root_left)?;
    let frames = lay.frames.clone();
    let trace = lay.trace.clone();
    let mut drawing = lay.into_plane_drawing(g, Some(iota.vertex_perm().to_vec()));
    let mut sets = pair_sets(g, iota);
    sets.extend(extra);
    drawing.certify(&sets)?;
    Ok(HyperellipticEmbedding {
        drawing,
        frames,
        constraint: FaceConstraint { sets },
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::verify_drawing;
    use crate::generate::random_hyperelliptic;

    fn check(g: &MultiGraph, iota: &Involution) -> HyperellipticEmbedding {
        let emb = embed_hyperelliptic(g, iota).unwrap();
        let r = verify_drawing(&emb.drawing).unwrap();
        assert_eq!(r.orientable_genus, 0);
        emb
    }

    #[test]
    fn banana_pair_on_outer_face() {
        let g = MultiGraph::from_edges(2, &[(0, 1); 4]).unwrap();
        let inv = Involution::new(g.clone(), vec![1, 0], (0..4).collect()).unwrap();
        let emb = check(&g, &inv);
        assert_eq!(emb.drawing.certificates.len(), 1);
        assert_eq!(emb.frames.len(), 1);
        assert_eq!(emb.frames[0].psi, vec![0; 4]);
    }

    #[test]
    fn c4_reflection_square() {
        let c4 = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let inv = Involution::from_vertex_perm(&c4, vec![0, 3, 2, 1]).unwrap();
        let emb = check(&c4, &inv);
        assert_eq!(emb.drawing.certificates[0].vertices, vec![1, 3]);
    }

    #[test]
    fn c6_two_pairs_share_a_face() {
        let c6 = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let inv = Involution::from_vertex_perm(&c6, vec![0, 5, 4, 3, 2, 1]).unwrap();
        let emb = embed_with_two_pairs(&c6, &inv, &[1, 5], &[2, 4]).unwrap();
        verify_drawing(&emb.drawing).unwrap();
        assert!(emb.drawing.certificates.iter().any(|c| c.vertices == vec![1, 2, 4, 5]));
    }

    #[test]
    fn generated_graphs_embed() {
        for seed in 0..60 {
            let (g, inv) = random_hyperelliptic(seed, 8);
            let emb = check(&g, &inv);
            assert_eq!(emb.drawing.certificates.len(), g.vertices().filter(|&v| inv.apply(v) > v).count());
        }
    }

    #[test]
    fn rejects_bad_witness() {
        let k4 = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let inv = Involution::from_vertex_perm(&k4, vec![1, 0, 3, 2]).unwrap();
        assert!(matches!(embed_hyperelliptic(&k4, &inv), Err(Error::InvalidInvolution(_))));
        let c4 = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let inv = Involution::from_vertex_perm(&c4, vec![0, 3, 2, 1]).unwrap();
        assert!(embed_with_two_pairs(&c4, &inv, &[1], &[0]).is_err());
    }
}
