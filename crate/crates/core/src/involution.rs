//! Order-two automorphisms, mixing, quotients, and hyperelliptic/bielliptic
//! detection.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{betti_genus, MultiGraph, VertexId};
use crate::morphism::{EdgeImage, GraphMorphism};

/// Default node budget for the involution search.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Involution {
    graph: MultiGraph,
    vertex_perm: Vec<VertexId>,
    edge_perm: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct QuotientResult {
    pub quotient: MultiGraph,
    pub projection: GraphMorphism,
    /// Quotient vertices that are images of fixed vertices.
    pub fixed_vertices: Vec<VertexId>,
}

#[derive(Debug, Clone)]
pub struct Detection {
    pub verdict: bool,
    pub witness: Option<Involution>,
}

fn is_order_two(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &j)| j < p.len() && p[j] == i)
}

impl Involution {
    pub fn new(graph: MultiGraph, vertex_perm: Vec<VertexId>, edge_perm: Vec<usize>) -> Result<Self> {
        if vertex_perm.len() != graph.vertex_count() || edge_perm.len() != graph.edge_count() {
            return Err(Error::InvalidInvolution(format!(
                "expected {} vertex and {} edge images, got {} and {}",
                graph.vertex_count(),
                graph.edge_count(),
                vertex_perm.len(),
                edge_perm.len()
            )));
        }
        if !is_order_two(&vertex_perm) {
            return Err(Error::InvalidInvolution("vertex permutation is not an involution".into()));
        }
        if !is_order_two(&edge_perm) {
            return Err(Error::InvalidInvolution("edge permutation is not an involution".into()));
        }
        for (i, &j) in edge_perm.iter().enumerate() {
            let [u, v] = graph.ends(i);
            let (su, sv) = (vertex_perm[u], vertex_perm[v]);
            let ends = graph.ends(j);
            if !(ends == [su, sv] || ends == [sv, su]) {
                return Err(Error::InvalidInvolution(format!(
                    "edge index {i} maps to edge index {j} but endpoints do not follow"
                )));
            }
        }
        Ok(Involution {
            graph,
            vertex_perm,
            edge_perm,
        })
    }

    pub fn identity(graph: &MultiGraph) -> Self {
        Involution {
            graph: graph.clone(),
            vertex_perm: graph.vertices().collect(),
            edge_perm: (0..graph.edge_count()).collect(),
        }
    }

    /// Extends a vertex involution by the canonical edge action: parallel
    /// bundles mapped to other bundles are matched in edge order, bundles
    /// whose ends are swapped stay fixed, and bundles with both ends fixed
    /// are paired consecutively (an odd bundle keeps its last edge fixed).
    /// `None` if `vertex_perm` is not an automorphism of order at most two.
    pub fn from_vertex_perm(graph: &MultiGraph, vertex_perm: Vec<VertexId>) -> Option<Self> {
        if vertex_perm.len() != graph.vertex_count() || !is_order_two(&vertex_perm) {
            return None;
        }
        let mut bundles: BTreeMap<(VertexId, VertexId), Vec<usize>> = BTreeMap::new();
        for (i, e) in graph.edges().iter().enumerate() {
            let [u, v] = e.ends;
            bundles.entry((u.min(v), u.max(v))).or_default().push(i);
        }
        let mut edge_perm: Vec<usize> = (0..graph.edge_count()).collect();
        for (&(u, v), list) in &bundles {
            let (su, sv) = (vertex_perm[u], vertex_perm[v]);
            let image = (su.min(sv), su.max(sv));
            if image != (u, v) {
                let other = bundles.get(&image)?;
                if other.len() != list.len() {
                    return None;
                }
                for (&a, &b) in list.iter().zip(other) {
                    edge_perm[a] = b;
                }
            } else if su == u {
                for pair in list.chunks_exact(2) {
                    edge_perm[pair[0]] = pair[1];
                    edge_perm[pair[1]] = pair[0];
                }
            }
        }
        Some(Involution {
            graph: graph.clone(),
            vertex_perm,
            edge_perm,
        })
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn vertex_perm(&self) -> &[VertexId] {
        &self.vertex_perm
    }

    pub fn edge_perm(&self) -> &[usize] {
        &self.edge_perm
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.vertex_perm[v]
    }

    pub fn apply_edge(&self, e: usize) -> usize {
        self.edge_perm[e]
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_perm.iter().enumerate().all(|(i, &j)| i == j)
            && self.edge_perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn fixed_vertices(&self) -> Vec<VertexId> {
        self.graph.vertices().filter(|&v| self.vertex_perm[v] == v).collect()
    }

    pub fn is_mixing(&self) -> bool {
        is_mixing(self)
    }

    pub fn quotient(&self) -> Result<QuotientResult> {
        quotient(self)
    }
}

/// Every edge fixed by the edge permutation must have its endpoints swapped.
pub fn is_mixing(inv: &Involution) -> bool {
    inv.edge_perm.iter().enumerate().all(|(i, &j)| {
        if i != j {
            return true;
        }
        let [u, v] = inv.graph.ends(i);
        inv.vertex_perm[u] == v
    })
}

pub fn quotient(inv: &Involution) -> Result<QuotientResult> {
    if !is_mixing(inv) {
        return Err(Error::NotMixing);
    }
    let g = &inv.graph;
    let mut orbit = vec![usize::MAX; g.vertex_count()];
    let mut count = 0;
    let mut fixed_vertices = Vec::new();
    for v in g.vertices() {
        if orbit[v] == usize::MAX {
            orbit[v] = count;
            orbit[inv.vertex_perm[v]] = count;
            if inv.vertex_perm[v] == v {
                fixed_vertices.push(count);
            }
            count += 1;
        }
    }
    let mut quotient = MultiGraph::new(count);
    let mut edge_map = vec![EdgeImage::Vertex(0); g.edge_count()];
    let mut done = vec![false; g.edge_count()];
    for i in 0..g.edge_count() {
        if done[i] {
            continue;
        }
        let j = inv.edge_perm[i];
        done[i] = true;
        done[j] = true;
        let [u, v] = g.ends(i).map(|x| orbit[x]);
        let image = if u == v {
            EdgeImage::Vertex(u)
        } else {
            quotient.add_edge(u, v)?;
            EdgeImage::Edge(quotient.edge_count() - 1)
        };
        edge_map[i] = image;
        edge_map[j] = image;
    }
    let projection = GraphMorphism::new(g.clone(), quotient.clone(), orbit, edge_map)?;
    Ok(QuotientResult {
        quotient,
        projection,
        fixed_vertices,
    })
}

fn multiplicity_matrix(g: &MultiGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0; n]; n];
    for e in g.edges() {
        let [u, v] = e.ends;
        m[u][v] += 1;
        if u != v {
            m[v][u] += 1;
        }
    }
    m
}

struct Search<'a> {
    graph: &'a MultiGraph,
    mult: Vec<Vec<usize>>,
    degree: Vec<usize>,
    perm: Vec<usize>,
    nodes: u64,
    budget: u64,
    found: Vec<Involution>,
}

impl Search<'_> {
    fn consistent(&self, v: usize, w: usize) -> bool {
        if self.degree[v] != self.degree[w] || self.mult[v][v] != self.mult[w][w] {
            return false;
        }
        // pairs among already assigned vertices, including the new pair itself
        (0..self.perm.len()).all(|x| {
            let sx = self.perm[x];
            sx == usize::MAX || (self.mult[v][x] == self.mult[w][sx] && self.mult[w][x] == self.mult[v][sx])
        }) && self.mult[v][w] == self.mult[w][v]
    }

    fn run(&mut self, next: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        let n = self.perm.len();
        let Some(v) = (next..n).find(|&v| self.perm[v] == usize::MAX) else {
            if let Some(inv) = Involution::from_vertex_perm(self.graph, self.perm.clone()) {
                if !inv.is_identity() && inv.is_mixing() {
                    self.found.push(inv);
                }
            }
            return Ok(());
        };
        for w in v..n {
            if self.perm[w] != usize::MAX || !self.consistent(v, w) {
                continue;
            }
            self.perm[v] = w;
            self.perm[w] = v;
            self.run(v + 1)?;
            self.perm[v] = usize::MAX;
            self.perm[w] = usize::MAX;
        }
        Ok(())
    }
}

/// All mixing involutions of `g`, one per vertex involution (canonical edge
/// action), in lexicographic order of vertex permutations. Fails with
/// `BudgetExceeded` when the search is truncated.
pub fn enumerate_mixing_involutions(g: &MultiGraph, budget: u64) -> Result<Vec<Involution>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut search = Search {
        graph: g,
        mult: multiplicity_matrix(g),
        degree: g.degrees(),
        perm: vec![usize::MAX; g.vertex_count()],
        nodes: 0,
        budget,
        found: Vec::new(),
    };
    search.run(0)?;
    Ok(search.found)
}

/// Mixing involutions whose quotient has the given cycle rank and is connected.
pub fn witnesses_with_quotient_betti(g: &MultiGraph, betti: usize, budget: u64) -> Result<Vec<Involution>> {
    let mut out = Vec::new();
    for inv in enumerate_mixing_involutions(g, budget)? {
        let q = quotient(&inv)?.quotient;
        let report = betti_genus(&q);
        if report.component_count == 1 && report.betti == betti {
            out.push(inv);
        }
    }
    Ok(out)
}

pub fn detect_hyperelliptic(g: &MultiGraph, budget: u64) -> Result<Detection> {
    let witness = witnesses_with_quotient_betti(g, 0, budget)?.into_iter().next();
    Ok(Detection {
        verdict: witness.is_some(),
        witness,
    })
}

pub fn detect_bielliptic(g: &MultiGraph, budget: u64) -> Result<Detection> {
    let witness = witnesses_with_quotient_betti(g, 1, budget)?.into_iter().next();
    Ok(Detection {
        verdict: witness.is_some(),
        witness,
    })
}

/// Serializable permutation pair.
#[derive(Debug, Clone, Serialize)]
pub struct InvolutionMaps<'a> {
    pub vertex_perm: &'a [VertexId],
    pub edge_perm: &'a [usize],
}

impl Involution {
    pub fn maps(&self) -> InvolutionMaps<'_> {
        InvolutionMaps {
            vertex_perm: &self.vertex_perm,
            edge_perm: &self.edge_perm,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::is_harmonic;

    fn cycle(n: usize) -> MultiGraph {
        MultiGraph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn banana(n: usize) -> MultiGraph {
        MultiGraph::from_edges(2, &vec![(0, 1); n]).unwrap()
    }

    #[test]
    fn identity_is_not_mixing() {
        assert!(!Involution::identity(&cycle(3)).is_mixing());
    }

    #[test]
    fn banana_swap_quotient_is_a_point() {
        let b = banana(4);
        let inv = Involution::new(b.clone(), vec![1, 0], (0..4).collect()).unwrap();
        assert!(inv.is_mixing());
        let q = inv.quotient().unwrap();
        assert_eq!(q.quotient.vertex_count(), 1);
        assert_eq!(q.quotient.edge_count(), 0);
        let h = is_harmonic(&q.projection);
        assert!(h.constant && h.degree == 0);
    }

    #[test]
    fn c4_reflection_quotient_is_path() {
        let c4 = cycle(4);
        let inv = Involution::from_vertex_perm(&c4, vec![0, 3, 2, 1]).unwrap();
        assert!(inv.is_mixing());
        let q = inv.quotient().unwrap();
        assert_eq!(q.quotient.vertex_count(), 3);
        assert!(betti_genus(&q.quotient).is_tree);
        assert_eq!(q.fixed_vertices.len(), 2);
        let h = is_harmonic(&q.projection);
        assert!(h.harmonic && h.degree == 2);
    }

    #[test]
    fn k5_double_transposition_quotient() {
        let mut edges = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                edges.push((i, j));
            }
        }
        let k5 = MultiGraph::from_edges(5, &edges).unwrap();
        let inv = Involution::from_vertex_perm(&k5, vec![1, 0, 3, 2, 4]).unwrap();
        assert!(inv.is_mixing());
        let q = inv.quotient().unwrap().quotient;
        assert_eq!((q.vertex_count(), q.edge_count(), betti_genus(&q).betti), (3, 4, 2));
    }

    #[test]
    fn rejects_bad_permutations() {
        let c4 = cycle(4);
        assert!(Involution::new(c4.clone(), vec![1, 2, 3, 0], vec![0, 1, 2, 3]).is_err());
        assert!(Involution::new(c4.clone(), vec![0, 3, 2, 1], vec![0, 1, 2, 3]).is_err());
        assert!(matches!(Involution::identity(&c4).quotient(), Err(Error::NotMixing)));
    }

    #[test]
    fn doubled_edge_vertex_identity_is_mixing() {
        // vertex-fixed, edges swapped: the fixed-edge clause is vacuous
        let g = banana(2);
        let found = enumerate_mixing_involutions(&g, DEFAULT_BUDGET).unwrap();
        assert!(found.iter().any(|i| i.vertex_perm() == [0, 1]));
    }

    #[test]
    fn budget_truncation_is_reported() {
        assert!(matches!(
            enumerate_mixing_involutions(&cycle(8), 3),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
