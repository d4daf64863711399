//! Seeded generators of graphs with a prescribed degree-two quotient.
//!
//! A base graph is lifted vertex by vertex: a fixed vertex lifts to one
//! vertex, a split vertex `p` to a pair `a_p, b_p` (optionally joined by
//! horizontal edges). Split-split edges lift as a vertical pair
//! (`a_p a_q`, `b_p b_q`) or a cross pair (`a_p b_q`, `b_p a_q`),
//! fixed-split edges as a transfer pair and fixed-fixed edges as a doubled
//! edge.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{betti_genus, MultiGraph};
use crate::involution::Involution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marking {
    Fixed,
    Split { horizontals: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lift {
    Vertical,
    Cross,
}

/// Lifts `base` without relabelling. Vertices are numbered in base order,
/// a split vertex taking two consecutive ids (`a` then `b`).
pub fn lift(base: &MultiGraph, marking: &[Marking], lifts: &[Lift]) -> Result<(MultiGraph, Involution)> {
    if marking.len() != base.vertex_count() || lifts.len() != base.edge_count() {
        return Err(Error::InvalidInput("marking or lift list has the wrong length".into()));
    }
    if base.has_loops() {
        return Err(Error::InvalidInput("base graph has loops".into()));
    }
    check_fixed_chains(base, marking)?;

    let mut g = MultiGraph::new(0);
    let mut vperm = Vec::new();
    let mut eperm = Vec::new();
    // (a, b) per base vertex; a == b for fixed vertices
    let mut copies = Vec::with_capacity(base.vertex_count());
    for m in marking {
        let a = g.add_vertex();
        match m {
            Marking::Fixed => {
                vperm.push(a);
                copies.push((a, a));
            }
            Marking::Split { .. } => {
                let b = g.add_vertex();
                vperm.extend([b, a]);
                copies.push((a, b));
            }
        }
    }
    let push_pair = |g: &mut MultiGraph, eperm: &mut Vec<usize>, x: (usize, usize), y: (usize, usize)| {
        let i = g.edge_count();
        g.add_edge(x.0, x.1).expect("lifted vertices exist");
        g.add_edge(y.0, y.1).expect("lifted vertices exist");
        eperm.extend([i + 1, i]);
    };
    for (p, m) in marking.iter().enumerate() {
        if let Marking::Split { horizontals } = *m {
            let (a, b) = copies[p];
            for _ in 0..horizontals {
                eperm.push(g.edge_count());
                g.add_edge(a, b)?;
            }
        }
    }
    for (e, l) in base.edges().iter().zip(lifts) {
        let [p, q] = e.ends;
        let (ap, bp) = copies[p];
        let (aq, bq) = copies[q];
        match (marking[p], marking[q], l) {
            (Marking::Split { .. }, Marking::Split { .. }, Lift::Vertical) => {
                push_pair(&mut g, &mut eperm, (ap, aq), (bp, bq))
            }
            (Marking::Split { .. }, Marking::Split { .. }, Lift::Cross) => {
                push_pair(&mut g, &mut eperm, (ap, bq), (bp, aq))
            }
            _ => push_pair(&mut g, &mut eperm, (ap, aq), (bp, bq)),
        }
    }
    if !g.is_connected() {
        return Err(Error::InvalidInput("lift is disconnected".into()));
    }
    let inv = Involution::new(g.clone(), vperm, eperm)?;
    Ok((g, inv))
}

/// Fixed-fixed base edges must form disjoint simple paths.
fn check_fixed_chains(base: &MultiGraph, marking: &[Marking]) -> Result<()> {
    let fixed: Vec<bool> = marking.iter().map(|m| *m == Marking::Fixed).collect();
    let ff: Vec<usize> = (0..base.edge_count())
        .filter(|&i| base.ends(i).iter().all(|&v| fixed[v]))
        .collect();
    let mut deg = vec![0; base.vertex_count()];
    let mut uf = crate::graph::UnionFind::new(base.vertex_count());
    for &i in &ff {
        let [u, v] = base.ends(i);
        deg[u] += 1;
        deg[v] += 1;
        if !uf.union(u, v) {
            return Err(Error::InvalidInput("fixed vertices span a cycle".into()));
        }
    }
    if deg.iter().any(|&d| d > 2) {
        return Err(Error::InvalidInput("fixed vertices must form chains".into()));
    }
    Ok(())
}

/// Applies a seeded relabelling of vertices and edge order.
pub fn shuffle(g: &MultiGraph, inv: &Involution, rng: &mut impl Rng) -> Result<(MultiGraph, Involution)> {
    let n = g.vertex_count();
    let mut vmap: Vec<usize> = (0..n).collect();
    vmap.shuffle(rng);
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.shuffle(rng);
    let mut pos = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let mut h = MultiGraph::new(n);
    for &old in &order {
        let [u, v] = g.ends(old);
        if rng.gen_bool(0.5) {
            h.add_edge(vmap[v], vmap[u])?;
        } else {
            h.add_edge(vmap[u], vmap[v])?;
        }
    }
    let mut vperm = vec![0; n];
    for v in 0..n {
        vperm[vmap[v]] = vmap[inv.apply(v)];
    }
    let eperm = order.iter().map(|&old| pos[inv.apply_edge(old)]).collect();
    let inv = Involution::new(h.clone(), vperm, eperm)?;
    Ok((h, inv))
}

/// Lift of a tree, relabelled by `seed`.
pub fn generate_hyperelliptic(
    seed: u64,
    tree: &MultiGraph,
    marking: &[Marking],
    lifts: &[Lift],
) -> Result<(MultiGraph, Involution)> {
    if !betti_genus(tree).is_tree {
        return Err(Error::InvalidInput("base is not a tree".into()));
    }
    let (g, inv) = lift(tree, marking, lifts)?;
    shuffle(&g, &inv, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Lift of a connected cycle-rank-one graph, relabelled by `seed`.
pub fn generate_bielliptic(
    seed: u64,
    base: &MultiGraph,
    marking: &[Marking],
    lifts: &[Lift],
) -> Result<(MultiGraph, Involution)> {
    let r = betti_genus(base);
    if r.betti != 1 || r.component_count != 1 {
        return Err(Error::InvalidInput("base must be connected with cycle rank one".into()));
    }
    let (g, inv) = lift(base, marking, lifts)?;
    shuffle(&g, &inv, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Random tree on `n` vertices by uniform attachment.
pub fn random_tree(n: usize, rng: &mut impl Rng) -> MultiGraph {
    let edges: Vec<_> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    MultiGraph::from_edges(n.max(1), &edges).expect("attachment edges are valid")
}

fn random_choices(base: &MultiGraph, rng: &mut impl Rng) -> (Vec<Marking>, Vec<Lift>) {
    let n = base.vertex_count();
    let mut marking = vec![Marking::Split { horizontals: 0 }; n];
    let mut fixed_deg = vec![0usize; n];
    let adj = base.adjacency();
    for v in 0..n {
        if rng.gen_bool(0.3) {
            let fixed_nbrs: Vec<_> = adj[v].iter().filter(|&&w| marking[w] == Marking::Fixed).collect();
            let room = fixed_nbrs.len() <= 2 && fixed_nbrs.iter().all(|&&w| fixed_deg[w] < 2);
            if room {
                marking[v] = Marking::Fixed;
                fixed_deg[v] = fixed_nbrs.len();
                for &&w in &fixed_nbrs {
                    fixed_deg[w] += 1;
                }
            }
        }
    }
    for m in marking.iter_mut() {
        if let Marking::Split { horizontals } = m {
            if rng.gen_bool(0.3) {
                *horizontals = rng.gen_range(1..=2);
            }
        }
    }
    let lifts = (0..base.edge_count())
        .map(|_| if rng.gen_bool(0.5) { Lift::Cross } else { Lift::Vertical })
        .collect();
    (marking, lifts)
}

/// Random hyperelliptic graph over a random tree with `2..=max_tree` vertices.
pub fn random_hyperelliptic(seed: u64, max_tree: usize) -> (MultiGraph, Involution) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(2..=max_tree.max(2));
        let tree = random_tree(n, &mut rng);
        let (marking, lifts) = random_choices(&tree, &mut rng);
        if let Ok((g, inv)) = lift(&tree, &marking, &lifts) {
            if g.edge_count() > 0 {
                return shuffle(&g, &inv, &mut rng).expect("relabelling preserves validity");
            }
        }
    }
}

/// Random bielliptic graph: a cycle of length `2..=6` with random trees
/// hung off it, at most `max_base` base vertices in total.
pub fn random_bielliptic(seed: u64, max_base: usize) -> (MultiGraph, Involution) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let max_base = max_base.max(2);
        let k = rng.gen_range(2..=6.min(max_base));
        let n = rng.gen_range(k..=max_base);
        let mut edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        edges.extend((k..n).map(|i| (rng.gen_range(0..i), i)));
        let base = MultiGraph::from_edges(n, &edges).expect("valid base");
        let (marking, lifts) = random_choices(&base, &mut rng);
        if let Ok((g, inv)) = lift(&base, &marking, &lifts) {
            return shuffle(&g, &inv, &mut rng).expect("relabelling preserves validity");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::is_isomorphic;

    fn path2() -> MultiGraph {
        MultiGraph::from_edges(2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn crossed_edge_with_horizontals_is_c4() {
        let split1 = Marking::Split { horizontals: 1 };
        let (g, inv) = generate_hyperelliptic(7, &path2(), &[split1, split1], &[Lift::Cross]).unwrap();
        let c4 = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(is_isomorphic(&g, &c4));
        assert!(is_isomorphic(&inv.quotient().unwrap().quotient, &path2()));
    }

    #[test]
    fn split_centre_fixed_leaves_is_banana_with_midpoints() {
        let star = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let m = [Marking::Split { horizontals: 0 }, Marking::Fixed, Marking::Fixed, Marking::Fixed];
        let (g, _) = lift(&star, &m, &[Lift::Vertical; 3]).unwrap();
        let expected =
            MultiGraph::from_edges(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]).unwrap();
        assert!(is_isomorphic(&g, &expected));
    }

    #[test]
    fn rejects_bad_markings() {
        let split = Marking::Split { horizontals: 0 };
        assert!(lift(&path2(), &[split, split], &[Lift::Vertical]).is_err());
        let star = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(lift(&star, &[Marking::Fixed; 4], &[Lift::Vertical; 3]).is_err());
        let tri = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(generate_hyperelliptic(0, &tri, &[split; 3], &[Lift::Cross; 3]).is_err());
    }

    #[test]
    fn triangle_all_cross_is_k33() {
        let tri = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let split1 = Marking::Split { horizontals: 1 };
        let (g, inv) = generate_bielliptic(3, &tri, &[split1; 3], &[Lift::Cross; 3]).unwrap();
        let mut k33 = Vec::new();
        for i in 0..3 {
            for j in 3..6 {
                k33.push((i, j));
            }
        }
        assert!(is_isomorphic(&g, &MultiGraph::from_edges(6, &k33).unwrap()));
        assert_eq!(betti_genus(&inv.quotient().unwrap().quotient).betti, 1);
    }

    #[test]
    fn all_vertical_cycle_lift_is_rejected() {
        let c4 = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let split = Marking::Split { horizontals: 0 };
        assert!(generate_bielliptic(0, &c4, &[split; 4], &[Lift::Vertical; 4]).is_err());
        let mut lifts = [Lift::Vertical; 4];
        lifts[2] = Lift::Cross;
        let (g, _) = generate_bielliptic(0, &c4, &[split; 4], &lifts).unwrap();
        assert!(g.is_connected());
    }
}
