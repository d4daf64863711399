//! Rotation systems, face tracing, minimum genus and planarity.
//!
//! Darts: edge index `i` has dart `2i` leaving `ends[0]` and dart `2i + 1`
//! leaving `ends[1]`. A loop contributes both darts to the same vertex.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use rustworkx_core::petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, VertexId};

pub type Dart = usize;

pub fn reverse(d: Dart) -> Dart {
    d ^ 1
}

pub fn dart_edge(d: Dart) -> usize {
    d / 2
}

pub fn dart_tail(g: &MultiGraph, d: Dart) -> VertexId {
    g.ends(d / 2)[d % 2]
}

pub fn dart_head(g: &MultiGraph, d: Dart) -> VertexId {
    g.ends(d / 2)[1 - d % 2]
}

/// Darts leaving each vertex, in edge order.
pub fn darts_at(g: &MultiGraph) -> Vec<Vec<Dart>> {
    let mut out = vec![Vec::new(); g.vertex_count()];
    for (i, e) in g.edges().iter().enumerate() {
        out[e.ends[0]].push(2 * i);
        out[e.ends[1]].push(2 * i + 1);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    graph: MultiGraph,
    rotation: Vec<Vec<Dart>>,
}

/// One step of a face walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceStep {
    pub edge: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub face_count: usize,
    pub faces: Vec<Vec<FaceStep>>,
    pub orientable_genus: usize,
}

impl EmbeddingReport {
    /// Vertices on the boundary of face `f`, sorted and deduplicated.
    pub fn face_vertices(&self, f: usize) -> Vec<VertexId> {
        let mut vs: Vec<_> = self.faces[f].iter().map(|s| s.from).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// First face whose boundary contains every vertex in `set`.
    pub fn face_containing(&self, set: &[VertexId]) -> Option<usize> {
        (0..self.faces.len()).find(|&f| {
            let vs = self.face_vertices(f);
            set.iter().all(|v| vs.binary_search(v).is_ok())
        })
    }
}

impl RotationSystem {
    /// `rotation[v]` is the cyclic order of darts leaving `v`.
    pub fn new(graph: MultiGraph, rotation: Vec<Vec<Dart>>) -> Result<Self> {
        if rotation.len() != graph.vertex_count() {
            return Err(Error::InvalidInput("one rotation per vertex required".into()));
        }
        let mut seen = vec![false; 2 * graph.edge_count()];
        for (v, rot) in rotation.iter().enumerate() {
            for &d in rot {
                if d >= seen.len() || seen[d] || dart_tail(&graph, d) != v {
                    return Err(Error::InvalidInput(format!("dart {d} misplaced at vertex {v}")));
                }
                seen[d] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidInput("rotation misses a dart".into()));
        }
        Ok(RotationSystem { graph, rotation })
    }

    /// Rotation with darts in edge order at every vertex.
    pub fn default_for(graph: &MultiGraph) -> Self {
        RotationSystem {
            rotation: darts_at(graph),
            graph: graph.clone(),
        }
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn rotation(&self) -> &[Vec<Dart>] {
        &self.rotation
    }

    fn successor_table(&self) -> Vec<Dart> {
        let mut succ = vec![0; 2 * self.graph.edge_count()];
        for rot in &self.rotation {
            for (k, &d) in rot.iter().enumerate() {
                succ[d] = rot[(k + 1) % rot.len()];
            }
        }
        succ
    }

    /// Rotation with every cyclic order reversed (the mirror embedding).
    pub fn reversed(&self) -> Self {
        RotationSystem {
            graph: self.graph.clone(),
            rotation: self
                .rotation
                .iter()
                .map(|r| r.iter().rev().copied().collect())
                .collect(),
        }
    }
}

/// Traces faces with `next(d) = succ(reverse(d))`.
pub fn trace_faces(rs: &RotationSystem) -> EmbeddingReport {
    let g = &rs.graph;
    let succ = rs.successor_table();
    let mut used = vec![false; succ.len()];
    let mut faces = Vec::new();
    for start in 0..succ.len() {
        if used[start] {
            continue;
        }
        let mut walk = Vec::new();
        let mut d = start;
        while !used[d] {
            used[d] = true;
            walk.push(FaceStep {
                edge: g.edge(dart_edge(d)).id,
                from: dart_tail(g, d),
                to: dart_head(g, d),
            });
            d = succ[reverse(d)];
        }
        faces.push(walk);
    }
    let (components, _) = g.components();
    // isolated vertices and edgeless components each bound one face
    let isolated = g.degrees().iter().filter(|&&d| d == 0).count();
    let face_count = faces.len() + isolated;
    // sum over components of (2 - 2 g_i) = V - E + F
    let chi = g.vertex_count() as isize - g.edge_count() as isize + face_count as isize;
    let orientable_genus = ((2 * components as isize - chi) / 2).max(0) as usize;
    EmbeddingReport {
        face_count,
        faces,
        orientable_genus,
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Number of rotation systems, saturating.
pub fn rotation_system_count(g: &MultiGraph) -> u128 {
    g.degrees()
        .iter()
        .map(|&d| factorial(d.saturating_sub(1)))
        .fold(1u128, |a, b| a.saturating_mul(b))
}

fn permutations(items: &[Dart]) -> Vec<Vec<Dart>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Face count for the successor table, without allocating walks.
fn count_faces(succ: &[Dart], used: &mut [bool]) -> usize {
    used.iter_mut().for_each(|u| *u = false);
    let mut faces = 0;
    for start in 0..succ.len() {
        if used[start] {
            continue;
        }
        faces += 1;
        let mut d = start;
        while !used[d] {
            used[d] = true;
            d = succ[reverse(d)];
        }
    }
    faces
}

/// Exact minimum orientable genus by exhaustive search over rotation
/// systems. Fails with `BudgetExceeded` when there are more than `budget`
/// systems.
pub fn minimum_genus(g: &MultiGraph, budget: u64) -> Result<usize> {
    Ok(minimum_genus_with_count(g, budget)?.0)
}

/// As [`minimum_genus`], also returning how many systems were examined.
pub fn minimum_genus_with_count(g: &MultiGraph, budget: u64) -> Result<(usize, u64)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let total = rotation_system_count(g);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded { budget });
    }
    let chi_base = g.vertex_count() as isize - g.edge_count() as isize;
    let genus_of = |faces: usize| ((2 - chi_base - faces as isize) / 2) as usize;
    let lower = euler_lower_bound(g);

    // per vertex: all cyclic orders, first dart pinned
    let options: Vec<Vec<Vec<Dart>>> = darts_at(g)
        .into_iter()
        .map(|ds| {
            if ds.is_empty() {
                return vec![Vec::new()];
            }
            permutations(&ds[1..])
                .into_iter()
                .map(|mut p| {
                    p.insert(0, ds[0]);
                    p
                })
                .collect()
        })
        .collect();
    let n = options.len();
    let split = (0..n).max_by_key(|&v| options[v].len()).unwrap_or(0);
    let best = AtomicUsize::new(usize::MAX);
    let examined = std::sync::atomic::AtomicU64::new(0);
    let darts = 2 * g.edge_count();

    (0..options.get(split).map_or(1, Vec::len)).into_par_iter().for_each(|first| {
        let mut succ = vec![0; darts];
        let mut used = vec![false; darts];
        let set = |succ: &mut Vec<Dart>, rot: &[Dart]| {
            for (k, &d) in rot.iter().enumerate() {
                succ[d] = rot[(k + 1) % rot.len()];
            }
        };
        let others: Vec<usize> = (0..n).filter(|&v| v != split).collect();
        if n > 0 {
            set(&mut succ, &options[split][first]);
        }
        let mut digits = vec![0usize; others.len()];
        for (k, &v) in others.iter().enumerate() {
            set(&mut succ, &options[v][digits[k]]);
        }
        let mut local = 0u64;
        loop {
            if best.load(Ordering::Relaxed) <= lower {
                break;
            }
            local += 1;
            let genus = genus_of(count_faces(&succ, &mut used));
            best.fetch_min(genus, Ordering::Relaxed);
            // odometer step
            let mut k = 0;
            loop {
                if k == others.len() {
                    examined.fetch_add(local, Ordering::Relaxed);
                    return;
                }
                let v = others[k];
                digits[k] += 1;
                if digits[k] == options[v].len() {
                    digits[k] = 0;
                    set(&mut succ, &options[v][0]);
                    k += 1;
                } else {
                    set(&mut succ, &options[v][digits[k]]);
                    break;
                }
            }
        }
        examined.fetch_add(local, Ordering::Relaxed);
    });
    Ok((best.load(Ordering::Relaxed), examined.load(Ordering::Relaxed)))
}

/// Length of a shortest cycle of a simple graph, `None` for forests.
fn girth(g: &MultiGraph) -> Option<usize> {
    let adj = g.adjacency();
    let mut best: Option<usize> = None;
    for s in g.vertices() {
        let mut dist = vec![usize::MAX; g.vertex_count()];
        let mut parent = vec![usize::MAX; g.vertex_count()];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Genus lower bound from Euler's formula and face lengths at least the
/// girth; 0 for graphs with loops or parallel edges.
pub fn euler_lower_bound(g: &MultiGraph) -> usize {
    if g.simplified().edge_count() != g.edge_count() {
        return 0;
    }
    let Some(girth) = girth(g) else { return 0 };
    let (v, e, k) = (g.vertex_count() as i64, g.edge_count() as i64, girth as i64);
    // 2 - 2g = V - E + F and F <= 2E / k
    let num = e * (k - 2) - k * (v - 2);
    if num <= 0 {
        0
    } else {
        ((num + 2 * k - 1) / (2 * k)) as usize
    }
}

/// A rotation system realising the minimum genus, found by the same search
/// run sequentially.
pub fn minimum_genus_rotation(g: &MultiGraph, budget: u64) -> Result<RotationSystem> {
    let target = minimum_genus(g, budget)?;
    let base = darts_at(g);
    let options: Vec<Vec<Vec<Dart>>> = base
        .iter()
        .map(|ds| {
            if ds.is_empty() {
                return vec![Vec::new()];
            }
            permutations(&ds[1..])
                .into_iter()
                .map(|mut p| {
                    p.insert(0, ds[0]);
                    p
                })
                .collect()
        })
        .collect();
    let mut digits = vec![0usize; options.len()];
    loop {
        let rotation: Vec<Vec<Dart>> = digits.iter().enumerate().map(|(v, &k)| options[v][k].clone()).collect();
        let rs = RotationSystem::new(g.clone(), rotation)?;
        if trace_faces(&rs).orientable_genus == target {
            return Ok(rs);
        }
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Err(Error::Internal("minimum genus rotation vanished".into()));
            }
            digits[k] += 1;
            if digits[k] == options[k].len() {
                digits[k] = 0;
                k += 1;
            } else {
                break;
            }
        }
    }
}

/// Planarity of the underlying simple graph (loops and parallel edges never
/// affect planarity).
pub fn is_planar(g: &MultiGraph) -> bool {
    let s = g.simplified();
    let mut pg: UnGraph<(), ()> = UnGraph::with_capacity(s.vertex_count(), s.edge_count());
    for _ in s.vertices() {
        pg.add_node(());
    }
    for e in s.edges() {
        pg.add_edge(NodeIndex::new(e.ends[0]), NodeIndex::new(e.ends[1]), ());
    }
    rustworkx_core::planar::is_planar(&pg)
}
