//! Undirected multigraphs with loops, parallel edges and stable edge ids.
//!
//! Vertices are dense indices `0..vertex_count`. Edges carry an [`EdgeId`]
//! that survives every operation that does not delete the edge; algorithms
//! that need dense storage use the edge *index* (position in [`MultiGraph::edges`]).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub ends: [VertexId; 2],
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    /// The endpoint opposite to `v` (or `v` itself for a loop).
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

/// Cycle rank and connectivity summary of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusReport {
    pub betti: usize,
    pub is_tree: bool,
    pub component_count: usize,
}

impl MultiGraph {
    pub fn new(vertex_count: usize) -> Self {
        MultiGraph {
            vertex_count,
            edges: Vec::new(),
        }
    }

    /// Builds a graph whose edge ids are the positions in `edges`.
    pub fn from_edges(vertex_count: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = MultiGraph::new(vertex_count);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Graph with explicit edge ids, which must be distinct.
    pub fn from_id_edges(vertex_count: usize, edges: &[(EdgeId, [VertexId; 2])]) -> Result<Self> {
        let mut g = MultiGraph::new(vertex_count);
        let mut ids = BTreeSet::new();
        for &(id, [u, v]) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::MissingVertex(u.max(v)));
            }
            if !ids.insert(id) {
                return Err(Error::InvalidInput(format!("duplicate edge id {id}")));
            }
            g.edges.push(Edge { id, ends: [u, v] });
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    /// Appends an edge with a fresh id (one more than the largest id in use).
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        let id = EdgeId(self.edges.last().map_or(0, |e| e.id.0 + 1));
        self.push_edge(id, u, v)?;
        Ok(id)
    }

    fn push_edge(&mut self, id: EdgeId, u: VertexId, v: VertexId) -> Result<()> {
        for w in [u, v] {
            if w >= self.vertex_count {
                return Err(Error::MissingVertex(w));
            }
        }
        debug_assert!(self.edges.last().map_or(true, |e| e.id < id));
        self.edges.push(Edge { id, ends: [u, v] });
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    pub fn ends(&self, index: usize) -> [VertexId; 2] {
        self.edges[index].ends
    }

    /// Position of the edge with the given id.
    pub fn index_of(&self, id: EdgeId) -> Option<usize> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok()
    }

    /// Edge indices incident to each vertex; a loop is listed twice.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.ends[0]].push(i);
            inc[e.ends[1]].push(i);
        }
        inc
    }

    /// Neighbour lists with multiplicity; a loop contributes its vertex twice.
    pub fn adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adj[e.ends[0]].push(e.ends[1]);
            adj[e.ends[1]].push(e.ends[0]);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in &self.edges {
            deg[e.ends[0]] += 1;
            deg[e.ends[1]] += 1;
        }
        deg
    }

    /// Number of edges joining `u` and `v` (loops at `u` when `u == v`).
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        self.edges
            .iter()
            .filter(|e| (e.ends == [u, v]) || (e.ends == [v, u]))
            .count()
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    /// Component label of every vertex, labels numbered by smallest member.
    pub fn components(&self) -> (usize, Vec<usize>) {
        self.components_without(&[])
    }

    /// Components after ignoring the edges whose indices are listed.
    pub fn components_without(&self, skip: &[usize]) -> (usize, Vec<usize>) {
        let mut uf = UnionFind::new(self.vertex_count);
        for (i, e) in self.edges.iter().enumerate() {
            if !skip.contains(&i) {
                uf.union(e.ends[0], e.ends[1]);
            }
        }
        uf.labels()
    }

    pub fn is_connected(&self) -> bool {
        self.components().0 <= 1
    }

    /// Sorted endpoint multiset; equal for graphs that agree up to edge ids.
    pub fn canonical_form(&self) -> (usize, Vec<(VertexId, VertexId)>) {
        let mut pairs: Vec<_> = self
            .edges
            .iter()
            .map(|e| (e.ends[0].min(e.ends[1]), e.ends[0].max(e.ends[1])))
            .collect();
        pairs.sort_unstable();
        (self.vertex_count, pairs)
    }

    /// Loops dropped and parallel classes collapsed to one edge each.
    pub fn simplified(&self) -> MultiGraph {
        let mut seen = BTreeSet::new();
        let mut g = MultiGraph::new(self.vertex_count);
        for e in &self.edges {
            let key = (e.ends[0].min(e.ends[1]), e.ends[0].max(e.ends[1]));
            if !e.is_loop() && seen.insert(key) {
                g.edges.push(*e);
            }
        }
        g
    }

    pub(crate) fn set_ends(&mut self, index: usize, u: VertexId, v: VertexId) {
        self.edges[index].ends = [u, v];
    }

    /// Copy with the listed edge indices removed; surviving ids are kept.
    pub fn without_edges(&self, remove: &[usize]) -> MultiGraph {
        MultiGraph {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .enumerate()
                .filter(|(i, _)| !remove.contains(i))
                .map(|(_, e)| *e)
                .collect(),
        }
    }

    /// Relabels vertices through `merge` (old -> new, `new_count` targets).
    /// Edges listed in `drop` are removed; surviving edges keep their ids.
    pub fn quotient_vertices(&self, merge: &[VertexId], new_count: usize, drop: &[usize]) -> MultiGraph {
        MultiGraph {
            vertex_count: new_count,
            edges: self
                .edges
                .iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, e)| Edge {
                    id: e.id,
                    ends: [merge[e.ends[0]], merge[e.ends[1]]],
                })
                .collect(),
        }
    }

    /// Disjoint union of `self` followed by `other`.
    pub fn disjoint_union(&self, other: &MultiGraph) -> MultiGraph {
        let mut g = self.clone();
        let shift = g.vertex_count;
        g.vertex_count += other.vertex_count;
        for e in &other.edges {
            g.add_edge(e.ends[0] + shift, e.ends[1] + shift)
                .expect("shifted endpoints are in range");
        }
        g
    }

    /// Subgraph induced on the vertices selected by `keep`, renumbered in order.
    /// Returns the subgraph and the old index of each new vertex.
    pub fn induced(&self, keep: &[bool]) -> (MultiGraph, Vec<VertexId>) {
        let mut new_of = vec![usize::MAX; self.vertex_count];
        let mut old_of = Vec::new();
        for v in self.vertices() {
            if keep[v] {
                new_of[v] = old_of.len();
                old_of.push(v);
            }
        }
        let mut g = MultiGraph::new(old_of.len());
        for e in &self.edges {
            if keep[e.ends[0]] && keep[e.ends[1]] {
                g.edges.push(Edge {
                    id: e.id,
                    ends: [new_of[e.ends[0]], new_of[e.ends[1]]],
                });
            }
        }
        (g, old_of)
    }
}

/// Cycle rank `E - V + components`; loops and parallel edges each count once.
pub fn betti_genus(g: &MultiGraph) -> GenusReport {
    let (components, _) = g.components();
    let betti = g.edge_count() + components - g.vertex_count();
    GenusReport {
        betti,
        is_tree: betti == 0 && components == 1,
        component_count: components,
    }
}

pub fn delete_loops(g: &MultiGraph) -> MultiGraph {
    MultiGraph {
        vertex_count: g.vertex_count,
        edges: g.edges.iter().filter(|e| !e.is_loop()).copied().collect(),
    }
}

/// Cut edges. A member of a parallel class is never a bridge.
pub fn find_bridges(g: &MultiGraph) -> BTreeSet<EdgeId> {
    let inc = g.incidence();
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut bridges = BTreeSet::new();
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (vertex, edge used to enter, next incidence position)
        let mut stack: Vec<(VertexId, Option<usize>, usize)> = vec![(root, None, 0)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while let Some(&mut (v, parent_edge, ref mut pos)) = stack.last_mut() {
            if *pos < inc[v].len() {
                let ei = inc[v][*pos];
                *pos += 1;
                if Some(ei) == parent_edge || g.edges[ei].is_loop() {
                    continue;
                }
                let w = g.edges[ei].other(v);
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, Some(ei), 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let (Some(ei), Some(&(p, _, _))) = (parent_edge, stack.last()) {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        bridges.insert(g.edges[ei].id);
                    }
                }
            }
        }
    }
    bridges
}

/// Contracts every bridge. The merge map sends old vertices to new ones.
pub fn contract_bridges(g: &MultiGraph) -> Result<(MultiGraph, Vec<VertexId>)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let bridges = find_bridges(g);
    let mut uf = UnionFind::new(g.vertex_count());
    let mut drop = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if bridges.contains(&e.id) {
            uf.union(e.ends[0], e.ends[1]);
            drop.push(i);
        }
    }
    let (count, merge) = uf.labels();
    Ok((g.quotient_vertices(&merge, count, &drop), merge))
}

/// Replaces a non-loop edge `u-v` by `u-w-v`. The `u-w` half keeps the old id,
/// the `w-v` half gets a fresh id.
pub fn subdivide_edge(g: &MultiGraph, id: EdgeId) -> Result<(MultiGraph, VertexId)> {
    let index = g.index_of(id).ok_or(Error::MissingEdge(id))?;
    let e = g.edges[index];
    if e.is_loop() {
        return Err(Error::LoopEdge(id));
    }
    let mut out = g.clone();
    let w = out.add_vertex();
    out.edges[index].ends = [e.ends[0], w];
    out.add_edge(w, e.ends[1])?;
    Ok((out, w))
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller index as root so labels are stable
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }

    /// Dense labels numbered by smallest member.
    pub(crate) fn labels(&mut self) -> (usize, Vec<usize>) {
        let n = self.parent.len();
        let mut label = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut count = 0;
        for v in 0..n {
            let r = self.find(v);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            out[v] = label[r];
        }
        (count, out)
    }
}
