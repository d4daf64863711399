//! Vertex partition and edge classes of a hyperelliptic graph, and the
//! reductions that simplify it to transfer and cross edges only.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{betti_genus, EdgeId, MultiGraph, UnionFind, VertexId};
use crate::involution::Involution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    /// Both ends on side A.
    SideA,
    SideB,
    /// Both ends fixed.
    Fixed,
    /// `a_i - b_i`.
    Horizontal,
    /// `a_i - b_j`, `i != j`.
    Cross,
    /// Fixed vertex to side A.
    TransferA,
    TransferB,
}

#[derive(Debug, Clone, Serialize)]
pub struct HyperellipticDecomposition {
    #[serde(skip)]
    pub graph: MultiGraph,
    #[serde(skip)]
    pub iota: Involution,
    pub fixed: Vec<VertexId>,
    /// `a_1..a_n`, deepest pairs of the rooted quotient last.
    pub side_a: Vec<VertexId>,
    /// `b_i = iota(a_i)`.
    pub side_b: Vec<VertexId>,
    /// Class of each edge, by edge index.
    #[serde(skip)]
    pub classes: Vec<EdgeClass>,
    pub e_a: Vec<EdgeId>,
    pub e_b: Vec<EdgeId>,
    pub e_f: Vec<EdgeId>,
    pub horizontal: Vec<EdgeId>,
    pub cross: Vec<EdgeId>,
    pub t_a: Vec<EdgeId>,
    pub t_b: Vec<EdgeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Fixed,
    A(usize),
    B(usize),
}

/// Decomposition with `a_i = min(v, iota(v))` for each exchanged pair.
pub fn decompose(g: &MultiGraph, iota: &Involution) -> Result<HyperellipticDecomposition> {
    let side_a: Vec<VertexId> = g.vertices().filter(|&v| iota.apply(v) > v).collect();
    decompose_with_sides(g, iota, &side_a)
}

/// Decomposition with an explicit choice of one vertex per exchanged pair.
pub fn decompose_with_sides(
    g: &MultiGraph,
    iota: &Involution,
    chosen: &[VertexId],
) -> Result<HyperellipticDecomposition> {
    if iota.graph() != g {
        return Err(Error::InvalidInvolution("involution belongs to a different graph".into()));
    }
    if let Some(e) = g.edges().iter().find(|e| e.is_loop()) {
        return Err(Error::LoopEdge(e.id));
    }
    let q = iota.quotient()?;
    if !betti_genus(&q.quotient).is_tree {
        return Err(Error::InvalidInvolution("quotient is not a tree".into()));
    }
    let orbit = q.projection.vertex_map();

    // order pairs by depth in the quotient rooted at orbit 0
    let qadj = q.quotient.adjacency();
    let mut depth = vec![usize::MAX; q.quotient.vertex_count()];
    let mut queue = std::collections::VecDeque::from([0]);
    depth[0] = 0;
    while let Some(x) = queue.pop_front() {
        for &y in &qadj[x] {
            if depth[y] == usize::MAX {
                depth[y] = depth[x] + 1;
                queue.push_back(y);
            }
        }
    }
    let mut side_a = chosen.to_vec();
    side_a.sort_by_key(|&v| (depth[orbit[v]], v));
    let mut seen = vec![false; g.vertex_count()];
    for &a in &side_a {
        let b = iota.apply(a);
        if a == b || seen[a] || seen[b] {
            return Err(Error::InvalidInput(format!("vertex {a} is not a fresh exchanged vertex")));
        }
        seen[a] = true;
        seen[b] = true;
    }
    let fixed = iota.fixed_vertices();
    if fixed.len() + 2 * side_a.len() != g.vertex_count() {
        return Err(Error::InvalidInput("side choice misses an exchanged pair".into()));
    }
    let side_b: Vec<VertexId> = side_a.iter().map(|&a| iota.apply(a)).collect();

    let mut side = vec![Side::Fixed; g.vertex_count()];
    for (i, (&a, &b)) in side_a.iter().zip(&side_b).enumerate() {
        side[a] = Side::A(i);
        side[b] = Side::B(i);
    }
    let mut d = HyperellipticDecomposition {
        graph: g.clone(),
        iota: iota.clone(),
        fixed,
        side_a,
        side_b,
        classes: Vec::with_capacity(g.edge_count()),
        e_a: vec![],
        e_b: vec![],
        e_f: vec![],
        horizontal: vec![],
        cross: vec![],
        t_a: vec![],
        t_b: vec![],
    };
    for e in g.edges() {
        let [x, y] = e.ends.map(|v| side[v]);
        let class = match (x, y) {
            (Side::Fixed, Side::Fixed) => EdgeClass::Fixed,
            (Side::Fixed, Side::A(_)) | (Side::A(_), Side::Fixed) => EdgeClass::TransferA,
            (Side::Fixed, Side::B(_)) | (Side::B(_), Side::Fixed) => EdgeClass::TransferB,
            (Side::A(_), Side::A(_)) => EdgeClass::SideA,
            (Side::B(_), Side::B(_)) => EdgeClass::SideB,
            (Side::A(i), Side::B(j)) | (Side::B(j), Side::A(i)) => {
                if i == j {
                    EdgeClass::Horizontal
                } else {
                    EdgeClass::Cross
                }
            }
        };
        let list = match class {
            EdgeClass::SideA => &mut d.e_a,
            EdgeClass::SideB => &mut d.e_b,
            EdgeClass::Fixed => &mut d.e_f,
            EdgeClass::Horizontal => &mut d.horizontal,
            EdgeClass::Cross => &mut d.cross,
            EdgeClass::TransferA => &mut d.t_a,
            EdgeClass::TransferB => &mut d.t_b,
        };
        list.push(e.id);
        d.classes.push(class);
    }
    Ok(d)
}

impl HyperellipticDecomposition {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("decomposition serializes")
    }

    fn indices_of(&self, class: EdgeClass) -> Vec<usize> {
        (0..self.classes.len()).filter(|&i| self.classes[i] == class).collect()
    }
}

/// `(A, E_A)` has no cycle.
pub fn check_forest_lemma(d: &HyperellipticDecomposition) -> bool {
    let mut uf = UnionFind::new(d.graph.vertex_count());
    d.indices_of(EdgeClass::SideA).into_iter().all(|i| {
        let [u, v] = d.graph.ends(i);
        uf.union(u, v)
    })
}

/// Every component of `(F, E_F)` is a single vertex or a path whose
/// consecutive vertices are joined by exactly two edges.
pub fn check_chain_lemma(d: &HyperellipticDecomposition) -> bool {
    let g = &d.graph;
    let ef = d.indices_of(EdgeClass::Fixed);
    let mut bundles = std::collections::BTreeMap::new();
    for &i in &ef {
        let [u, v] = g.ends(i);
        *bundles.entry((u.min(v), u.max(v))).or_insert(0usize) += 1;
    }
    if bundles.values().any(|&m| m != 2) {
        return false;
    }
    let mut deg = vec![0; g.vertex_count()];
    let mut uf = UnionFind::new(g.vertex_count());
    for &(u, v) in bundles.keys() {
        deg[u] += 1;
        deg[v] += 1;
        if !uf.union(u, v) {
            return false;
        }
    }
    deg.iter().all(|&x| x <= 2)
}

/// Builds the graph obtained by relabelling vertices through `merge` and
/// dropping `drop`, with the involution carried along.
fn contract(
    d: &HyperellipticDecomposition,
    merge: &[VertexId],
    count: usize,
    drop: &[usize],
) -> Result<(MultiGraph, Involution)> {
    let g = &d.graph;
    let h = g.quotient_vertices(merge, count, drop);
    let mut new_index = vec![usize::MAX; g.edge_count()];
    let mut next = 0;
    for (i, slot) in new_index.iter_mut().enumerate() {
        if !drop.contains(&i) {
            *slot = next;
            next += 1;
        }
    }
    let mut vperm = vec![usize::MAX; count];
    for v in g.vertices() {
        vperm[merge[v]] = merge[d.iota.apply(v)];
    }
    let eperm = (0..g.edge_count())
        .filter(|i| !drop.contains(i))
        .map(|i| new_index[d.iota.apply_edge(i)])
        .collect();
    let inv = Involution::new(h.clone(), vperm, eperm)?;
    Ok((h, inv))
}

fn merge_along(d: &HyperellipticDecomposition, edges: &[usize]) -> (usize, Vec<VertexId>) {
    let mut uf = UnionFind::new(d.graph.vertex_count());
    for &i in edges {
        let [u, v] = d.graph.ends(i);
        uf.union(u, v);
    }
    uf.labels()
}

/// Contracts every `(F, E_F)` component to a point.
pub fn reduce_fixed_components(d: &HyperellipticDecomposition) -> Result<(MultiGraph, Involution, Vec<VertexId>)> {
    if !check_chain_lemma(d) {
        return Err(Error::LemmaViolation("fixed components are not doubled chains".into()));
    }
    let ef = d.indices_of(EdgeClass::Fixed);
    let (count, merge) = merge_along(d, &ef);
    let (h, inv) = contract(d, &merge, count, &ef)?;
    Ok((h, inv, merge))
}

/// Contracts every `(A, E_A)` component, and its mirror in `(B, E_B)`.
pub fn reduce_side_components(d: &HyperellipticDecomposition) -> Result<(MultiGraph, Involution, Vec<VertexId>)> {
    if !check_forest_lemma(d) {
        return Err(Error::LemmaViolation("(A, E_A) contains a cycle".into()));
    }
    let mut side = d.indices_of(EdgeClass::SideA);
    side.extend(d.indices_of(EdgeClass::SideB));
    let (count, merge) = merge_along(d, &side);
    let (h, inv) = contract(d, &merge, count, &side)?;
    Ok((h, inv, merge))
}

/// Subdivides every horizontal edge by a new fixed vertex. Subdivided edges
/// keep their id on the `a` half; the `b` halves get fresh ids.
pub fn eliminate_horizontal(d: &HyperellipticDecomposition) -> Result<(MultiGraph, Involution)> {
    let g = &d.graph;
    let mut h = g.clone();
    let mut vperm = d.iota.vertex_perm().to_vec();
    let mut eperm = d.iota.edge_perm().to_vec();
    let mut side_a = vec![false; g.vertex_count()];
    for &a in &d.side_a {
        side_a[a] = true;
    }
    for i in d.indices_of(EdgeClass::Horizontal) {
        let [u, v] = g.ends(i);
        let (a, b) = if side_a[u] { (u, v) } else { (v, u) };
        let w = h.add_vertex();
        h.set_ends(i, a, w);
        h.add_edge(w, b)?;
        vperm.push(w);
        let j = h.edge_count() - 1;
        eperm[i] = j;
        eperm.push(i);
    }
    let inv = Involution::new(h.clone(), vperm, eperm)?;
    Ok((h, inv))
}
