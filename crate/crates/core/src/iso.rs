//! Isomorphism testing for small multigraphs: colour refinement followed by
//! backtracking over colour-compatible vertex assignments.

use std::collections::HashMap;

use crate::graph::{MultiGraph, VertexId};

fn multiplicity_matrix(g: &MultiGraph) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0u32; n]; n];
    for e in g.edges() {
        let [u, v] = e.ends;
        m[u][v] += 1;
        if u != v {
            m[v][u] += 1;
        }
    }
    m
}

/// Stable colouring computed jointly so colours are comparable across graphs.
fn refine(graphs: [&MultiGraph; 2], mats: [&Vec<Vec<u32>>; 2]) -> [Vec<usize>; 2] {
    let mut colors: [Vec<usize>; 2] = [
        vec![0; graphs[0].vertex_count()],
        vec![0; graphs[1].vertex_count()],
    ];
    let mut classes = 0usize;
    loop {
        let mut dict: HashMap<(usize, Vec<(usize, u32)>), usize> = HashMap::new();
        let mut next: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for k in 0..2 {
            let n = graphs[k].vertex_count();
            for v in 0..n {
                let mut sig: Vec<(usize, u32)> = (0..n)
                    .filter(|&w| mats[k][v][w] > 0)
                    .map(|w| (colors[k][w] + if w == v { usize::MAX / 2 } else { 0 }, mats[k][v][w]))
                    .collect();
                sig.sort_unstable();
                let key = (colors[k][v], sig);
                let fresh = dict.len();
                next[k].push(*dict.entry(key).or_insert(fresh));
            }
        }
        let count = dict.len();
        colors = next;
        if count == classes {
            return colors;
        }
        classes = count;
    }
}

/// A vertex bijection `g -> h` preserving edge multiplicities, if one exists.
pub fn find_isomorphism(g: &MultiGraph, h: &MultiGraph) -> Option<Vec<VertexId>> {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let (mg, mh) = (multiplicity_matrix(g), multiplicity_matrix(h));
    let [cg, ch] = refine([g, h], [&mg, &mh]);
    let mut hist_g = cg.clone();
    let mut hist_h = ch.clone();
    hist_g.sort_unstable();
    hist_h.sort_unstable();
    if hist_g != hist_h {
        return None;
    }
    // BFS order over g so each new vertex tends to have a mapped neighbour
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let adj = g.adjacency();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if assign(0, &order, &mg, &mh, &cg, &ch, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn assign(
    depth: usize,
    order: &[VertexId],
    mg: &[Vec<u32>],
    mh: &[Vec<u32>],
    cg: &[usize],
    ch: &[usize],
    map: &mut [VertexId],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..ch.len() {
        if used[w] || ch[w] != cg[v] || mg[v][v] != mh[w][w] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| mg[v][u] == mh[w][map[u]]);
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if assign(depth + 1, order, mg, mh, cg, ch, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

pub fn is_isomorphic(g: &MultiGraph, h: &MultiGraph) -> bool {
    find_isomorphism(g, h).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelled_graphs_match() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (0, 2)]).unwrap();
        let h = MultiGraph::from_edges(4, &[(3, 1), (1, 2), (2, 0), (0, 3), (1, 0), (1, 0)]).unwrap();
        let map = find_isomorphism(&g, &h).unwrap();
        for e in g.edges() {
            let [u, v] = e.ends;
            assert_eq!(g.multiplicity(u, v), h.multiplicity(map[u], map[v]));
        }
    }

    #[test]
    fn distinguishes_multiplicity_and_loops() {
        let a = MultiGraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        let b = MultiGraph::from_edges(2, &[(0, 1), (1, 1)]).unwrap();
        assert!(!is_isomorphic(&a, &b));
        let p = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!is_isomorphic(&p, &s));
    }

    #[test]
    fn regular_non_isomorphic_pair() {
        // C6 versus two disjoint triangles: identical colour refinement
        let c6 = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let tt = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!is_isomorphic(&c6, &tt));
        assert!(is_isomorphic(&c6, &c6));
    }
}
