//! Drawings of bielliptic graphs: the plane when possible, otherwise the
//! square `[-1,1]^2` with opposite sides glued.
//!
//! An edge of the quotient cycle is lifted to `e = a b` and `e' = a' b'`. The
//! rest of the graph has a tree quotient and is laid out symmetrically with
//! `{a, a'}` at the top and `{b, b'}` reachable from the outside. If `a` and
//! `b` end up on the same side, `e` and `e'` are drawn around the outside as
//! mirror images. Otherwise `e` leaves through the top and comes back from the
//! bottom, and `e'` leaves through the right side and comes back from the left.

use crate::drawing::{Drawing, DrawnEdge, Surface};
use crate::embed::{check_witness, layout, TreeLayout};
use crate::error::{Error, Result};
use crate::geometry::{q, qi, Point};
use crate::graph::{betti_genus, find_bridges, MultiGraph, VertexId};
use crate::involution::Involution;
use crate::morphism::EdgeImage;

/// How the drawing was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Cycle rank at most two; drawn directly from a depth-first tree.
    LowBetti,
    /// `e` and `e'` drawn as mirror images around the outside.
    Plane,
    /// `e` and `e'` drawn through the glued sides.
    Torus,
}

#[derive(Debug, Clone)]
pub struct BiellipticEmbedding {
    pub drawing: Drawing,
    pub route: Route,
    /// Edge indices of the lifted pair `e, e'`, when one was used.
    pub lifted: Option<[usize; 2]>,
    pub trace: Vec<String>,
}

/// Draws `g` in the plane or on the torus using the bielliptic involution
/// `alpha`.
pub fn embed_bielliptic(g: &MultiGraph, alpha: &Involution) -> Result<BiellipticEmbedding> {
    check_witness(g, alpha)?;
    let qr = alpha.quotient()?;
    if betti_genus(&qr.quotient).betti != 1 {
        return Err(Error::InvalidInvolution("quotient does not have cycle rank 1".into()));
    }
    if betti_genus(g).betti <= 2 {
        return Ok(BiellipticEmbedding {
            drawing: low_betti_drawing(g)?,
            route: Route::LowBetti,
            lifted: None,
            trace: vec!["cycle rank <= 2: depth-first drawing".into()],
        });
    }

    // a quotient edge on the cycle, preferring one at a fixed vertex
    let quo = &qr.quotient;
    let bridges = find_bridges(quo);
    let fixed = |o: usize| qr.fixed_vertices.contains(&o);
    let cycle: Vec<usize> = (0..quo.edge_count()).filter(|&t| !bridges.contains(&quo.edge(t).id)).collect();
    let &bar = cycle
        .iter()
        .find(|&&t| quo.ends(t).iter().any(|&o| fixed(o)))
        .or(cycle.first())
        .ok_or_else(|| Error::Internal("quotient has no cycle".into()))?;
    let mut lifts: Vec<usize> = qr
        .projection
        .edge_map()
        .iter()
        .enumerate()
        .filter(|(_, img)| **img == EdgeImage::Edge(bar))
        .map(|(i, _)| i)
        .collect();
    lifts.sort_unstable();
    if lifts.len() != 2 {
        return Err(Error::Internal("cycle edge does not lift to two edges".into()));
    }
    let g0 = g.without_edges(&lifts);
    if !g0.is_connected() {
        return Err(Error::LemmaViolation(
            "removing the lifted pair disconnects a graph of cycle rank >= 3".into(),
        ));
    }
    let keep: Vec<usize> = (0..g.edge_count()).filter(|i| !lifts.contains(i)).collect();
    let mut new_index = vec![usize::MAX; g.edge_count()];
    for (k, &i) in keep.iter().enumerate() {
        new_index[i] = k;
    }
    let alpha0 = Involution::new(
        g0.clone(),
        alpha.vertex_perm().to_vec(),
        keep.iter().map(|&i| new_index[alpha.apply_edge(i)]).collect(),
    )?;

    let vmap = qr.projection.vertex_map();
    let [oa, ob] = quo.ends(bar);
    // orient so that the root orbit is fixed whenever either end is
    let (oa, ob) = if fixed(ob) && !fixed(oa) { (ob, oa) } else { (oa, ob) };
    let e = lifts[0];
    let a = *g.ends(e).iter().find(|&&v| vmap[v] == oa).expect("end over root orbit");
    let lay = layout(&g0, &alpha0, oa, Some(ob), Some(a))?;
    let mut trace = lay.trace.clone();
    trace.push(format!("lift edges={lifts:?} root orbit={oa} chain orbit={ob}"));

    // e is the lift leaving the left copy of the root
    let left_a = lay.left[oa];
    // with a fixed root both lifts leave it; take the one to the left copy below
    let e = *lifts
        .iter()
        .find(|&&i| g.ends(i).contains(&left_a) && (!fixed(oa) || g.ends(i).contains(&lay.left[ob])))
        .expect("lift at left root");
    let e2 = alpha.apply_edge(e);
    let b = g.edge(e).other(left_a);
    let same_side = fixed(oa) || fixed(ob) || lay.left[ob] == b;
    let route = if same_side { Route::Plane } else { Route::Torus };
    trace.push(format!("route={route:?}"));

    let norm = lay.normalizer();
    let points: Vec<Point> = lay.points.iter().map(|&p| norm(p)).collect();
    let mut pieces: Vec<Vec<Vec<Point>>> = vec![Vec::new(); g.edge_count()];
    for (&i, line) in keep.iter().zip(&lay.lines) {
        pieces[i] = vec![line.iter().map(|&p| norm(p)).collect()];
    }

    let top = norm(Point::int(lay.points[left_a].x.to_integer() - 1, 1));
    // left copy of the chain orbit and its way in from the outside
    let low_left = lay.left[ob];
    let entry = entry_point(&lay, ob, &norm);
    let (e_line, e2_line): (Vec<Vec<Point>>, Vec<Vec<Point>>) = match route {
        Route::Plane => {
            let far = q(-3, 5);
            let line = vec![
                points[left_a],
                top,
                Point::new(far, top.y),
                Point::new(far, entry.y),
                entry,
                points[low_left],
            ];
            let mirrored = line.iter().map(|p| p.mirror()).collect();
            (vec![line], vec![mirrored])
        }
        Route::Torus => {
            let right_b = b;
            let (one, lane_e, lane_f) = (qi(1), q(4, 5), q(9, 10));
            let e_line = vec![
                vec![points[left_a], top, Point::new(top.x, one)],
                vec![
                    Point::new(top.x, -one),
                    Point::new(top.x, -lane_e),
                    Point::new(lane_e, -lane_e),
                    Point::new(lane_e, entry.y),
                    entry.mirror(),
                    points[right_b],
                ],
            ];
            let up = Point::new(q(3, 4), q(3, 4));
            let a2 = alpha.apply(left_a);
            let e2_line = vec![
                vec![points[a2], top.mirror(), Point::new(-top.x, up.y), Point::new(one, up.y)],
                vec![
                    Point::new(-one, up.y),
                    Point::new(-lane_f, up.y),
                    Point::new(-lane_f, entry.y),
                    entry,
                    points[low_left],
                ],
            ];
            (e_line, e2_line)
        }
        Route::LowBetti => unreachable!(),
    };
    pieces[e] = orient(g, e, e_line, &points);
    pieces[e2] = orient(g, e2, e2_line, &points);

    let edges = g
        .edges()
        .iter()
        .zip(pieces)
        .map(|(edge, pieces)| DrawnEdge { id: edge.id, ends: edge.ends, pieces })
        .collect();
    let drawing = Drawing {
        surface: if route == Route::Torus { Surface::Torus } else { Surface::Plane },
        graph: g.clone(),
        points,
        edges,
        mirror: (route == Route::Plane).then(|| alpha.vertex_perm().to_vec()),
        certificates: Vec::new(),
    };
    Ok(BiellipticEmbedding { drawing, route, lifted: Some([e, e2]), trace })
}

/// Point left of and half a row below orbit `o`, from which it can be reached
/// without crossing anything when `o` lies on the last-child chain.
fn entry_point(lay: &TreeLayout, o: usize, norm: &impl Fn(Point) -> Point) -> Point {
    let p = lay.points[lay.left[o]];
    let reach = lay.reach[o];
    norm(Point::new(qi(-reach - 1), p.y - q(1, 2)))
}

/// Reverses a route drawn from the wrong end.
fn orient(g: &MultiGraph, i: usize, mut route: Vec<Vec<Point>>, points: &[Point]) -> Vec<Vec<Point>> {
    let start = route[0][0];
    if start != points[g.ends(i)[0]] {
        route.reverse();
        for piece in &mut route {
            piece.reverse();
        }
    }
    route
}

/// Plane drawing of a connected loopless graph of cycle rank at most two.
/// A depth-first tree is drawn with `x` = depth and one row per vertex in
/// preorder; each vertex can then be reached by a horizontal ray to its right,
/// and along the last-child chain also to its left. One non-tree edge goes
/// around the left, the other around the right.
pub fn low_betti_drawing(g: &MultiGraph) -> Result<Drawing> {
    if let Some(e) = g.edges().iter().find(|e| e.is_loop()) {
        return Err(Error::LoopEdge(e.id));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if betti_genus(g).betti > 2 {
        return Err(Error::Unsupported("cycle rank above two".into()));
    }
    let n = g.vertex_count();
    let inc = g.incidence();
    let mut parent_edge = vec![usize::MAX; n];
    let mut depth = vec![0i128; n];
    let mut seen = vec![false; n];
    let mut kids: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut stack = vec![0usize];
    let mut cursor = vec![0usize; n];
    seen[0] = true;
    while let Some(&v) = stack.last() {
        if cursor[v] < inc[v].len() {
            let i = inc[v][cursor[v]];
            cursor[v] += 1;
            let w = g.edge(i).other(v);
            if !seen[w] {
                seen[w] = true;
                parent_edge[w] = i;
                depth[w] = depth[v] + 1;
                kids[v].push(w);
                stack.push(w);
            }
        } else {
            stack.pop();
        }
    }
    let extra: Vec<usize> = (0..g.edge_count()).filter(|&i| !parent_edge.contains(&i)).collect();
    let parent = |v: VertexId| g.edge(parent_edge[v]).other(v);
    let deeper = |i: usize| {
        let [u, v] = g.ends(i);
        if depth[u] > depth[v] {
            u
        } else {
            v
        }
    };
    if extra.len() == 2 {
        // the first extra edge goes left: put its lower end on the last-child chain
        let mut x = deeper(extra[0]);
        while x != 0 {
            let p = parent(x);
            let pos = kids[p].iter().position(|&c| c == x).expect("child");
            let c = kids[p].remove(pos);
            kids[p].push(c);
            x = p;
        }
    }
    let mut row = vec![0i128; n];
    let mut order = vec![0usize];
    let mut count = 0;
    while let Some(v) = order.pop() {
        row[v] = count;
        count += 1;
        order.extend(kids[v].iter().rev());
    }
    let max_depth = depth.iter().copied().max().unwrap_or(0);
    let at = |v: VertexId| Point::int(depth[v], -row[v]);
    let points: Vec<Point> = g.vertices().map(at).collect();
    let mut lines: Vec<Vec<Point>> = g.edges().iter().map(|e| vec![at(e.ends[0]), at(e.ends[1])]).collect();
    for (k, &i) in extra.iter().enumerate() {
        let [u, v] = g.ends(i);
        let col = if k == 0 && extra.len() == 2 { -1 } else { max_depth + 1 };
        lines[i] = vec![at(u), Point::int(col, -row[u]), Point::int(col, -row[v]), at(v)];
    }
    let mut d = Drawing::straight(g, points);
    for (edge, line) in d.edges.iter_mut().zip(lines) {
        edge.pieces = vec![line];
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::verify_drawing;
    use crate::generate::random_bielliptic;
    use crate::rotation::minimum_genus;

    fn k33() -> (MultiGraph, Involution) {
        let mut edges = Vec::new();
        for i in 0..3 {
            for j in 3..6 {
                edges.push((i, j));
            }
        }
        let g = MultiGraph::from_edges(6, &edges).unwrap();
        let inv = Involution::from_vertex_perm(&g, vec![3, 4, 5, 0, 1, 2]).unwrap();
        (g, inv)
    }

    #[test]
    fn k33_goes_to_the_torus() {
        let (g, inv) = k33();
        let emb = embed_bielliptic(&g, &inv).unwrap();
        assert_eq!(emb.route, Route::Torus);
        let r = verify_drawing(&emb.drawing).unwrap();
        assert_eq!(r.orientable_genus, 1);
        assert_eq!(minimum_genus(&g, 1_000_000).unwrap(), 1);
    }

    #[test]
    fn low_rank_graphs_are_drawn_flat() {
        let theta = MultiGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 2)]).unwrap();
        let r = verify_drawing(&low_betti_drawing(&theta).unwrap()).unwrap();
        assert_eq!(r.orientable_genus, 0);
        let triple = MultiGraph::from_edges(2, &[(0, 1); 3]).unwrap();
        verify_drawing(&low_betti_drawing(&triple).unwrap()).unwrap();
    }

    #[test]
    fn generated_graphs_have_genus_at_most_one() {
        for seed in 0..200 {
            let (g, inv) = random_bielliptic(seed, 8);
            let emb = embed_bielliptic(&g, &inv).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            let r = verify_drawing(&emb.drawing).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert!(r.orientable_genus <= 1);
            if emb.drawing.surface == Surface::Plane {
                assert_eq!(r.orientable_genus, 0);
            }
        }
    }
}
