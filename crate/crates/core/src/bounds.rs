//! Gonality bounds: treewidth from below, harmonic morphisms to trees from
//! above, and Laplacian spectra.
//!
//! Treewidth is taken on the simplification; loops and parallel edges do not
//! change it.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{to_f64, Q};
use crate::graph::{MultiGraph, VertexId};
use crate::involution::{detect_hyperelliptic, Involution};
use crate::morphism::{is_harmonic, EdgeImage, GraphMorphism};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Treewidth {
    Exact(usize),
    /// Search was cut short by the budget.
    Bounds { lower: usize, upper: usize },
}

impl Treewidth {
    pub fn lower(self) -> usize {
        match self {
            Treewidth::Exact(t) => t,
            Treewidth::Bounds { lower, .. } => lower,
        }
    }

    pub fn upper(self) -> usize {
        match self {
            Treewidth::Exact(t) => t,
            Treewidth::Bounds { upper, .. } => upper,
        }
    }
}

/// Largest vertex count handled by the subset search.
pub const TREEWIDTH_MAX_VERTICES: usize = 26;

fn neighbour_masks(g: &MultiGraph) -> Vec<u32> {
    let mut adj = vec![0u32; g.vertex_count()];
    for e in g.edges() {
        let [u, v] = e.ends;
        if u != v {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
    }
    adj
}

/// Minor-min-width: repeatedly contract a minimum-degree vertex into its
/// lowest-degree neighbour; the largest minimum degree seen is a lower bound.
pub fn treewidth_lower_bound(g: &MultiGraph) -> usize {
    let s = g.simplified();
    let n = s.vertex_count();
    let mut adj: Vec<std::collections::BTreeSet<usize>> = s.adjacency().into_iter().map(|a| a.into_iter().collect()).collect();
    let mut alive: Vec<bool> = vec![true; n];
    let mut best = 0;
    for _ in 1..n {
        let v = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (adj[v].len(), v)).expect("alive vertex");
        best = best.max(adj[v].len());
        alive[v] = false;
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        match nbrs.iter().copied().min_by_key(|&u| (adj[u].len(), u)) {
            None => {}
            Some(u) => {
                for &w in &nbrs {
                    adj[w].remove(&v);
                    if w != u {
                        adj[w].insert(u);
                        adj[u].insert(w);
                    }
                }
            }
        }
        adj[v].clear();
    }
    best
}

/// Width of the min-fill elimination ordering.
pub fn treewidth_upper_bound(g: &MultiGraph) -> usize {
    let s = g.simplified();
    let n = s.vertex_count();
    let mut adj: Vec<std::collections::BTreeSet<usize>> = s.adjacency().into_iter().map(|a| a.into_iter().collect()).collect();
    let mut alive = vec![true; n];
    let mut width = 0;
    for _ in 0..n {
        let fill = |v: usize| {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            let mut missing = 0;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if !adj[a].contains(&b) {
                        missing += 1;
                    }
                }
            }
            missing
        };
        let v = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (fill(v), adj[v].len(), v)).expect("alive");
        width = width.max(adj[v].len());
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for &a in &nb {
            adj[a].remove(&v);
            for &b in &nb {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        adj[v].clear();
        alive[v] = false;
    }
    width
}

/// Exact treewidth by dynamic programming over vertex subsets:
/// `TW(S) = min_{v in S} max(TW(S - v), |Q(S - v, v)|)` where `Q(S, v)` are
/// the vertices outside `S + v` adjacent to the component of `v` in
/// `G[S + v]`. `budget` caps the number of subsets visited; when it runs out
/// the heuristic bounds are returned instead.
pub fn treewidth_exact(g: &MultiGraph, budget: u64) -> Treewidth {
    let lower = treewidth_lower_bound(g);
    let upper = treewidth_upper_bound(g);
    if lower == upper {
        return Treewidth::Exact(lower);
    }
    match treewidth_by_subsets(g, budget) {
        Some(t) => Treewidth::Exact(t),
        None => Treewidth::Bounds { lower, upper },
    }
}

/// The subset recursion alone, without the heuristic shortcut; `None` when
/// `2^n` exceeds the budget.
pub fn treewidth_by_subsets(g: &MultiGraph, budget: u64) -> Option<usize> {
    let n = g.vertex_count();
    if n == 0 {
        return Some(0);
    }
    if n > TREEWIDTH_MAX_VERTICES || (1u64 << n) > budget {
        return None;
    }
    let adj = neighbour_masks(g);
    let full: u32 = (1u32 << n) - 1;
    let q_size = |s: u32, v: usize| -> u32 {
        let inside = s | (1 << v);
        let mut comp = 1u32 << v;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let w = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[w] & inside;
            }
            frontier = next & !comp;
            comp |= next;
        }
        let mut out = 0u32;
        let mut c = comp;
        while c != 0 {
            let w = c.trailing_zeros() as usize;
            c &= c - 1;
            out |= adj[w];
        }
        (out & !inside & full).count_ones()
    };
    let mut tw = vec![u8::MAX; 1usize << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            let val = tw[without as usize].max(q_size(without, v) as u8);
            best = best.min(val);
        }
        tw[s as usize] = best;
        if s == full {
            break;
        }
    }
    Some(tw[full as usize] as usize)
}

/// Treewidth at most two, by removing vertices of degree at most one and
/// suppressing vertices of degree two on the simplification.
pub fn series_parallel_check(g: &MultiGraph) -> bool {
    let s = g.simplified();
    let n = s.vertex_count();
    let mut adj: Vec<std::collections::BTreeSet<usize>> = s.adjacency().into_iter().map(|a| a.into_iter().collect()).collect();
    let mut alive = vec![true; n];
    let mut remaining = n;
    let mut queue: Vec<usize> = (0..n).collect();
    while let Some(v) = queue.pop() {
        if !alive[v] || adj[v].len() > 2 {
            continue;
        }
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for &u in &nb {
            adj[u].remove(&v);
        }
        if let [a, b] = nb[..] {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        adj[v].clear();
        alive[v] = false;
        remaining -= 1;
        queue.extend(nb);
    }
    remaining == 0
}

/// Shape hint for [`gonality_witnesses`], in catalog numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyHint {
    None,
    Grid { d: usize, n: usize },
    CompleteBipartite { d: usize, n: usize },
    Hypercube { n: usize },
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub degree: usize,
    pub description: String,
    pub morphism: GraphMorphism,
    /// Factorisation into degree-two quotients, when the witness is built
    /// that way.
    pub steps: Vec<GraphMorphism>,
}

fn path(n: usize) -> MultiGraph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    MultiGraph::from_edges(n, &edges).expect("path")
}

fn check(m: GraphMorphism, description: String, steps: Vec<GraphMorphism>) -> Result<Witness> {
    let r = is_harmonic(&m);
    if !r.harmonic || !r.non_degenerate || !crate::graph::betti_genus(m.target()).is_tree {
        return Err(Error::Internal(format!("witness `{description}` is not a harmonic map to a tree: {r:?}")));
    }
    Ok(Witness { degree: r.degree, description, morphism: m, steps })
}

/// Collapses each column of `grid(d, n)` when `d <= n`, each row otherwise.
fn grid_witness(g: &MultiGraph, d: usize, n: usize) -> Result<Witness> {
    let vertical = d <= n;
    let len = if vertical { n } else { d };
    let target = path(len);
    let pos = |v: VertexId| if vertical { v % n } else { v / n };
    let vmap: Vec<usize> = g.vertices().map(pos).collect();
    let emap = g
        .edges()
        .iter()
        .map(|e| {
            let [a, b] = e.ends.map(pos);
            if a == b {
                EdgeImage::Vertex(a)
            } else {
                EdgeImage::Edge(a.min(b))
            }
        })
        .collect();
    let m = GraphMorphism::new(g.clone(), target, vmap, emap)?;
    check(m, format!("collapse the {} of the {d}x{n} grid", if vertical { "columns" } else { "rows" }), Vec::new())
}

/// Identifies the smaller side of `K_{d,n}` to the centre of a star.
fn bipartite_witness(g: &MultiGraph, d: usize, n: usize) -> Result<Witness> {
    let (small_first, leaves) = (d <= n, d.max(n));
    let star_edges: Vec<(usize, usize)> = (1..=leaves).map(|i| (0, i)).collect();
    let star = MultiGraph::from_edges(leaves + 1, &star_edges)?;
    let leaf = |v: VertexId| -> Option<usize> {
        match (small_first, v < d) {
            (true, true) | (false, false) => None,
            (true, false) => Some(v - d),
            (false, true) => Some(v),
        }
    };
    let vmap: Vec<usize> = g.vertices().map(|v| leaf(v).map_or(0, |i| i + 1)).collect();
    let emap = g
        .edges()
        .iter()
        .map(|e| {
            let i = e.ends.iter().find_map(|&v| leaf(v)).expect("bipartite edge");
            EdgeImage::Edge(i)
        })
        .collect();
    let m = GraphMorphism::new(g.clone(), star, vmap, emap)?;
    check(m, format!("identify the side of size {} of K_{{{d},{n}}}", d.min(n)), Vec::new())
}

/// Quotients `Q_n -> Q_{n-1} -> ... -> Q_1` by flipping the top bit.
fn hypercube_witness(g: &MultiGraph, n: usize) -> Result<Witness> {
    if n == 0 {
        return Err(Error::InvalidInput("Q_0 has no edges".into()));
    }
    let mut steps = Vec::new();
    let mut current = g.clone();
    let mut total = GraphMorphism::identity(g);
    for k in (1..n).rev() {
        let perm: Vec<usize> = current.vertices().map(|v| v ^ (1 << k)).collect();
        let inv = Involution::from_vertex_perm(&current, perm)
            .ok_or_else(|| Error::Internal("bit flip is not an automorphism".into()))?;
        let qr = inv.quotient()?;
        let r = is_harmonic(&qr.projection);
        if !r.harmonic || r.degree != 2 {
            return Err(Error::Internal(format!("hypercube step {k} is not a degree-2 harmonic map")));
        }
        total = total.then(&qr.projection)?;
        current = qr.quotient.clone();
        steps.push(qr.projection);
    }
    check(total, format!("{} successive bit-flip quotients of Q_{n}", n - 1), steps)
}

/// Projection to the tree quotient of a hyperelliptic involution. When a
/// vertex has only flipped edges (a banana graph, say) the projection is
/// degenerate, so the flipped edges are subdivided first and their midpoints
/// become fixed vertices; the witness is then defined on that refinement.
fn hyperelliptic_witness(g: &MultiGraph, budget: u64) -> Result<Option<Witness>> {
    let Some(inv) = detect_hyperelliptic(g, budget)?.witness else {
        return Ok(None);
    };
    let qr = inv.quotient()?;
    let r = is_harmonic(&qr.projection);
    if r.harmonic && r.non_degenerate {
        return check(qr.projection, "quotient by the hyperelliptic involution".into(), Vec::new()).map(Some);
    }
    let flipped: Vec<usize> = (0..g.edge_count()).filter(|&e| inv.apply_edge(e) == e).collect();
    let mut refined = g.clone();
    let mut vperm = inv.vertex_perm().to_vec();
    let mut eperm = inv.edge_perm().to_vec();
    for &e in &flipped {
        let (next, w) = crate::graph::subdivide_edge(&refined, g.edge(e).id)?;
        refined = next;
        vperm.push(w);
        // the halves u-w (index e) and w-v (the new last edge) swap
        let half = refined.edge_count() - 1;
        eperm[e] = half;
        eperm.push(e);
    }
    let inv = Involution::new(refined, vperm, eperm)?;
    let qr = inv.quotient()?;
    check(
        qr.projection,
        format!("quotient by the hyperelliptic involution after subdividing {} flipped edge(s)", flipped.len()),
        Vec::new(),
    )
    .map(Some)
}

/// Cheapest non-degenerate map onto a single edge: a vertex bipartition in
/// which every vertex has a neighbour across, minimising the cut.
fn edge_collapse_witness(g: &MultiGraph) -> Result<Option<Witness>> {
    let n = g.vertex_count();
    if !(2..=20).contains(&n) || g.has_loops() {
        return Ok(None);
    }
    let mut best: Option<(usize, u32)> = None;
    for mask in 1u32..(1 << (n - 1)) {
        let side = |v: usize| (mask >> v) & 1;
        let mut across = vec![0usize; n];
        let mut cut = 0;
        for e in g.edges() {
            let [u, v] = e.ends;
            if side(u) != side(v) {
                across[u] += 1;
                across[v] += 1;
                cut += 1;
            }
        }
        if across.iter().all(|&a| a > 0) && best.is_none_or(|(c, _)| cut < c) {
            best = Some((cut, mask));
        }
    }
    let Some((_, mask)) = best else { return Ok(None) };
    let side = |v: usize| ((mask >> v) & 1) as usize;
    let vmap: Vec<usize> = g.vertices().map(side).collect();
    let emap = g
        .edges()
        .iter()
        .map(|e| {
            let [a, b] = e.ends.map(side);
            if a == b {
                EdgeImage::Vertex(a)
            } else {
                EdgeImage::Edge(0)
            }
        })
        .collect();
    let m = GraphMorphism::new(g.clone(), path(2), vmap, emap)?;
    Ok(Some(check(m, "collapse each side of a bipartition onto an edge".into(), Vec::new())?))
}

/// Verified harmonic morphisms to trees, lowest degree first.
pub fn gonality_witnesses(g: &MultiGraph, hint: FamilyHint, budget: u64) -> Result<Vec<Witness>> {
    let mut out = Vec::new();
    match hint {
        FamilyHint::Grid { d, n } if d >= 1 && n >= 1 => out.push(grid_witness(g, d, n)?),
        FamilyHint::CompleteBipartite { d, n } if d >= 1 && n >= 1 => out.push(bipartite_witness(g, d, n)?),
        FamilyHint::Hypercube { n } => out.push(hypercube_witness(g, n)?),
        _ => {}
    }
    if crate::graph::betti_genus(g).is_tree && g.edge_count() > 0 {
        out.push(check(GraphMorphism::identity(g), "identity onto a tree".into(), Vec::new())?);
    }
    if g.is_connected() && !g.has_loops() {
        match hyperelliptic_witness(g, budget) {
            Ok(Some(w)) => out.push(w),
            Ok(None) | Err(Error::BudgetExceeded { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    if let Some(w) = edge_collapse_witness(g)? {
        out.push(w);
    }
    out.sort_by_key(|w| w.degree);
    Ok(out)
}

/// Eigenvalues of `D - A` in ascending order; parallel edges count with
/// multiplicity and loops are ignored.
pub fn laplacian_spectrum(g: &MultiGraph) -> Vec<f64> {
    let n = g.vertex_count();
    let mut l = DMatrix::<f64>::zeros(n, n);
    for e in g.edges() {
        let [u, v] = e.ends;
        if u == v {
            continue;
        }
        l[(u, v)] -= 1.0;
        l[(v, u)] -= 1.0;
        l[(u, u)] += 1.0;
        l[(v, v)] += 1.0;
    }
    let mut ev: Vec<f64> = l.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `4 sin^2(j pi / 2n) + 4 sin^2(k pi / 2d)` for `0 <= j < n`, `0 <= k < d`,
/// ascending.
pub fn grid_spectrum_closed_form(d: usize, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(d * n);
    for j in 0..n {
        for k in 0..d {
            let a = (j as f64 * PI / (2.0 * n as f64)).sin();
            let b = (k as f64 * PI / (2.0 * d as f64)).sin();
            out.push(4.0 * a * a + 4.0 * b * b);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// A lower bound on stable gonality computed from the spectrum.
pub trait SpectralFormula {
    fn name(&self) -> &str;
    /// `spectrum` is ascending; the result must be a valid lower bound.
    fn bound(&self, g: &MultiGraph, spectrum: &[f64]) -> Result<Q>;
}

/// `lambda_1 |V| / (4 d_max)`, rounded down to a multiple of `2^-32`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LiYau;

impl SpectralFormula for LiYau {
    fn name(&self) -> &str {
        "li-yau"
    }

    fn bound(&self, g: &MultiGraph, spectrum: &[f64]) -> Result<Q> {
        if !g.is_connected() || g.vertex_count() < 2 {
            return Err(Error::InvalidInput("spectral bound needs a connected graph with an edge".into()));
        }
        let lambda1 = spectrum[1].max(0.0);
        let dmax = *g.degrees().iter().max().expect("nonempty") as f64;
        let raw = lambda1 * g.vertex_count() as f64 / (4.0 * dmax);
        // round down, with slack for eigensolver error
        let scale = (1u64 << 32) as f64;
        let num = ((raw - 1e-9).max(0.0) * scale).floor() as i128;
        Ok(Q::new(num, 1i128 << 32))
    }
}

pub fn spectral_lower_bound(g: &MultiGraph, formula: Option<&dyn SpectralFormula>) -> Result<Q> {
    let f = formula.ok_or_else(|| Error::Unsupported("no spectral formula supplied".into()))?;
    f.bound(g, &laplacian_spectrum(g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LowerSource {
    Treewidth,
    Spectral,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub treewidth: Treewidth,
    pub gonality_lower: usize,
    pub lower_source: LowerSource,
    pub spectral_bound: Option<f64>,
    /// Degree of the best verified witness; an upper bound.
    pub gonality_upper: Option<usize>,
    pub witness: Option<String>,
    pub spectrum: Vec<f64>,
}

pub fn bounds_report(g: &MultiGraph, hint: FamilyHint, budget: u64) -> Result<BoundsReport> {
    let treewidth = treewidth_exact(g, budget);
    let spectrum = laplacian_spectrum(g);
    let spectral = if g.is_connected() && g.vertex_count() >= 2 {
        Some(LiYau.bound(g, &spectrum)?)
    } else {
        None
    };
    let spectral_int = spectral.map_or(0, |b| b.ceil().to_integer() as usize);
    let (gonality_lower, lower_source) = if spectral_int > treewidth.lower() {
        (spectral_int, LowerSource::Spectral)
    } else {
        (treewidth.lower(), LowerSource::Treewidth)
    };
    let witnesses = gonality_witnesses(g, hint, budget)?;
    let best = witnesses.first();
    Ok(BoundsReport {
        treewidth,
        gonality_lower,
        lower_source,
        spectral_bound: spectral.map(to_f64),
        gonality_upper: best.map(|w| w.degree),
        witness: best.map(|w| w.description.clone()),
        spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{complete, complete_bipartite, cycle, grid, hypercube};

    #[test]
    fn small_treewidths() {
        let tree = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(treewidth_exact(&tree, 1 << 20), Treewidth::Exact(1));
        assert_eq!(treewidth_exact(&cycle(5), 1 << 20), Treewidth::Exact(2));
        assert_eq!(treewidth_exact(&complete(5), 1 << 20), Treewidth::Exact(4));
        assert_eq!(treewidth_exact(&complete_bipartite(3, 4), 1 << 20), Treewidth::Exact(3));
        assert_eq!(treewidth_exact(&hypercube(3), 1 << 20), Treewidth::Exact(3));
    }

    #[test]
    fn budget_gives_bounds() {
        let g = grid(4, 4);
        match treewidth_exact(&g, 10) {
            Treewidth::Bounds { lower, upper } => assert!(lower <= 4 && 4 <= upper),
            Treewidth::Exact(t) => assert_eq!(t, 4),
        }
    }

    #[test]
    fn series_parallel() {
        assert!(series_parallel_check(&cycle(6)));
        assert!(!series_parallel_check(&complete(4)));
        assert!(series_parallel_check(&crate::catalog::banana(5)));
    }

    #[test]
    fn witnesses() {
        let g = grid(3, 5);
        let w = gonality_witnesses(&g, FamilyHint::Grid { d: 3, n: 5 }, 1 << 20).unwrap();
        assert_eq!(w[0].degree, 3);
        assert_eq!(w[0].morphism.target().vertex_count(), 5);
        let k = complete_bipartite(3, 4);
        let w = gonality_witnesses(&k, FamilyHint::CompleteBipartite { d: 3, n: 4 }, 1 << 20).unwrap();
        assert_eq!(w[0].degree, 3);
        assert_eq!(w[0].morphism.target().edge_count(), 4);
        let q3 = hypercube(3);
        let w = gonality_witnesses(&q3, FamilyHint::Hypercube { n: 3 }, 1 << 20).unwrap();
        let chain = w.iter().find(|w| w.steps.len() == 2).unwrap();
        assert_eq!(chain.degree, 4);
        assert_eq!(chain.morphism.target().edge_count(), 1);
        let k4 = complete(4);
        let w = gonality_witnesses(&k4, FamilyHint::None, 1 << 20).unwrap();
        assert_eq!(w[0].degree, 3);
    }

    #[test]
    fn spectra() {
        let k2 = MultiGraph::from_edges(2, &[(0, 1)]).unwrap();
        let s = laplacian_spectrum(&k2);
        assert!((s[0]).abs() < 1e-9 && (s[1] - 2.0).abs() < 1e-9);
        let s = laplacian_spectrum(&grid(2, 2));
        for (a, b) in s.iter().zip([0.0, 2.0, 2.0, 4.0]) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(matches!(spectral_lower_bound(&k2, None), Err(Error::Unsupported(_))));
        let b = spectral_lower_bound(&complete(4), Some(&LiYau)).unwrap();
        assert!(b <= Q::from_integer(3));
    }
}
