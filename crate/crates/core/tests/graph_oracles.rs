use std::collections::BTreeMap;

use proptest::prelude::*;

use gonality::bounds::{gonality_witnesses, treewidth_exact, FamilyHint};
use gonality::catalog::{catalog, cycle, Value, NAMES};
use gonality::generate::{random_bielliptic, random_hyperelliptic};
use gonality::graph::{betti_genus, contract_bridges, find_bridges, subdivide_edge, EdgeId};
use gonality::involution::{detect_bielliptic, detect_hyperelliptic, DEFAULT_BUDGET};
use gonality::io::{parse_graph, write_graph};
use gonality::rotation::minimum_genus;
use gonality::MultiGraph;

/// Connected loop-free multigraph: a random tree plus extra (possibly
/// parallel) edges.
fn connected_multigraph(max_n: usize, max_extra: usize) -> impl Strategy<Value = MultiGraph> {
    (2..=max_n).prop_flat_map(move |n| {
        let parents = (1..n).map(|v| 0..v).collect::<Vec<_>>();
        let extra = prop::collection::vec((0..n, 0..n), 0..=max_extra);
        (Just(n), parents, extra).prop_map(|(n, parents, extra)| {
            let mut g = MultiGraph::new(n);
            for (v, p) in parents.into_iter().enumerate() {
                g.add_edge(p, v + 1).unwrap();
            }
            for (u, v) in extra {
                if u != v {
                    g.add_edge(u, v).unwrap();
                }
            }
            g
        })
    })
}

fn involutions(n: usize) -> Vec<Vec<usize>> {
    fn go(perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(v) = perm.iter().position(|&x| x == usize::MAX) else {
            out.push(perm.clone());
            return;
        };
        for w in v..perm.len() {
            if perm[w] == usize::MAX {
                perm[v] = w;
                perm[w] = v;
                go(perm, out);
                perm[v] = usize::MAX;
                perm[w] = usize::MAX;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut vec![usize::MAX; n], &mut out);
    out
}

/// Cycle ranks of the quotients by all mixing involutions of a loop-free
/// connected multigraph, straight from the definitions. An edge orbit whose
/// ends land in one vertex orbit is contracted; a bundle between two fixed
/// vertices must pair up, so its size must be even.
fn quotient_bettis(g: &MultiGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut mult: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in 0..g.edge_count() {
        let [u, v] = g.ends(e);
        *mult.entry((u.min(v), u.max(v))).or_default() += 1;
    }
    let mut out = Vec::new();
    for s in involutions(n) {
        let image = |(u, v): (usize, usize)| (s[u].min(s[v]), s[u].max(s[v]));
        if mult.iter().any(|(&k, &m)| mult.get(&image(k)) != Some(&m)) {
            continue;
        }
        if mult.iter().any(|(&(u, v), &m)| s[u] == u && s[v] == v && m % 2 == 1) {
            continue;
        }
        if s.iter().enumerate().all(|(i, &j)| i == j) && mult.values().all(|&m| m < 2) {
            continue;
        }
        let orbit_rep: Vec<usize> = (0..n).map(|v| v.min(s[v])).collect();
        let orbits = (0..n).filter(|&v| orbit_rep[v] == v).count();
        let crossing = (0..g.edge_count())
            .filter(|&e| {
                let [u, v] = g.ends(e);
                orbit_rep[u] != orbit_rep[v]
            })
            .count();
        out.push(crossing / 2 + 1 - orbits);
    }
    out
}

fn check_detection(g: &MultiGraph) -> Result<(), TestCaseError> {
    let bettis = quotient_bettis(g);
    let h = detect_hyperelliptic(g, DEFAULT_BUDGET).unwrap();
    let b = detect_bielliptic(g, DEFAULT_BUDGET).unwrap();
    prop_assert_eq!(h.verdict, bettis.contains(&0), "hyperelliptic, bettis {:?}", bettis);
    prop_assert_eq!(b.verdict, bettis.contains(&1), "bielliptic, bettis {:?}", bettis);
    for (w, want) in [(h.witness, 0), (b.witness, 1)] {
        if let Some(w) = w {
            prop_assert!(w.is_mixing());
            prop_assert_eq!(betti_genus(&w.quotient().unwrap().quotient).betti, want);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn detection_matches_brute_force(g in connected_multigraph(7, 6)) {
        check_detection(&g)?;
    }

    #[test]
    fn bridges_are_exactly_the_disconnecting_edges(g in connected_multigraph(9, 5)) {
        let bridges = find_bridges(&g);
        for i in 0..g.edge_count() {
            let cut = g.components_without(&[i]).0 > 1;
            prop_assert_eq!(bridges.contains(&g.edge(i).id), cut, "edge {}", i);
        }
    }

    #[test]
    fn betti_survives_subdivision_and_bridge_contraction(g in connected_multigraph(9, 5), pick in any::<prop::sample::Index>()) {
        let b = betti_genus(&g).betti;
        let e = g.edge(pick.index(g.edge_count())).id;
        let (s, w) = subdivide_edge(&g, e).unwrap();
        prop_assert_eq!(s.vertex_count(), g.vertex_count() + 1);
        prop_assert_eq!(s.degrees()[w], 2);
        prop_assert_eq!(betti_genus(&s).betti, b);
        let (c, merge) = contract_bridges(&g).unwrap();
        prop_assert_eq!(betti_genus(&c).betti, b);
        prop_assert!(find_bridges(&c).is_empty());
        prop_assert_eq!(merge.len(), g.vertex_count());
        let mut doubled = g.clone();
        let [u, v] = g.ends(0);
        doubled.add_edge(u, v).unwrap();
        prop_assert_eq!(betti_genus(&doubled).betti, b + 1);
    }
}

#[test]
fn detection_matches_brute_force_on_generator_outputs() {
    let mut checked = 0;
    for seed in 0..200 {
        for (g, _) in [random_hyperelliptic(seed, 4), random_bielliptic(seed, 4)] {
            if g.vertex_count() <= 9 && g.edges().iter().all(|e| e.ends[0] != e.ends[1]) {
                check_detection(&g).unwrap();
                checked += 1;
            }
        }
    }
    assert!(checked > 100, "only {checked} small outputs");
}

#[test]
fn c4_is_both_hyperelliptic_and_bielliptic() {
    let c4 = cycle(4);
    let mut bettis = quotient_bettis(&c4);
    bettis.sort_unstable();
    bettis.dedup();
    assert_eq!(bettis, vec![0, 1]);
    let b = detect_bielliptic(&c4, DEFAULT_BUDGET).unwrap();
    // the antipodal map: no fixed vertex, quotient is a double edge
    let w = b.witness.unwrap();
    assert_eq!(w.vertex_perm(), &[2, 3, 0, 1]);
    assert!(detect_hyperelliptic(&c4, DEFAULT_BUDGET).unwrap().verdict);
}

#[test]
fn generator_outputs_round_trip_through_text() {
    for seed in 0..50 {
        for (g, inv) in [random_hyperelliptic(seed, 8), random_bielliptic(seed, 6)] {
            let text = write_graph(&g, Some(&inv));
            let back = parse_graph(&text).unwrap();
            assert_eq!(back.graph, g);
            let binv = back.involution.unwrap();
            assert_eq!(binv.vertex_perm(), inv.vertex_perm());
            assert_eq!(binv.edge_perm(), inv.edge_perm());
            assert_eq!(write_graph(&back.graph, Some(&binv)), text);
        }
    }
}

#[test]
fn bridges_by_hand() {
    // two triangles joined by a path of two edges
    let g = MultiGraph::from_edges(7, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6), (6, 4)]).unwrap();
    let got: Vec<usize> = find_bridges(&g).into_iter().map(|EdgeId(i)| i).collect();
    assert_eq!(got, vec![3, 4]);
    let (c, _) = contract_bridges(&g).unwrap();
    assert_eq!((c.vertex_count(), c.edge_count()), (5, 6));
}

/// Every catalog value small enough to recompute is recomputed here.
#[test]
fn catalog_values_recomputed() {
    let cases: Vec<(&str, Vec<usize>)> = vec![
        ("grid", vec![2, 3]),
        ("grid", vec![3, 3]),
        ("grid", vec![3, 4]),
        ("complete_bipartite", vec![2, 4]),
        ("complete_bipartite", vec![3, 3]),
        ("complete_bipartite", vec![3, 4]),
        ("complete", vec![3]),
        ("complete", vec![4]),
        ("complete", vec![5]),
        ("cycle", vec![2]),
        ("cycle", vec![5]),
        ("banana", vec![3]),
        ("hypercube", vec![3]),
        ("paper-genus2-example", vec![]),
    ];
    let mut seen_names: Vec<&str> = cases.iter().map(|c| c.0).collect();
    seen_names.dedup();
    assert_eq!(seen_names, NAMES.to_vec());
    for (name, params) in cases {
        let entry = catalog(name, &params).unwrap();
        let g = &entry.graph;
        for (key, known) in &entry.expected {
            let got = match key.as_str() {
                "genus" => Value::Int(minimum_genus(g, u64::MAX).unwrap() as u64),
                "treewidth" => Value::Int(treewidth_exact(g, u64::MAX).upper() as u64),
                "hyperelliptic" => Value::Flag(detect_hyperelliptic(g, DEFAULT_BUDGET).unwrap().verdict),
                "bielliptic" => Value::Flag(detect_bielliptic(g, DEFAULT_BUDGET).unwrap().verdict),
                "gonality" => {
                    // sandwich: treewidth below, a verified witness above
                    let tw = treewidth_exact(g, u64::MAX).lower();
                    let hint = match (name, params.as_slice()) {
                        ("grid", &[d, n]) => FamilyHint::Grid { d, n },
                        ("complete_bipartite", &[d, n]) => FamilyHint::CompleteBipartite { d, n },
                        _ => FamilyHint::None,
                    };
                    let best = gonality_witnesses(g, hint, DEFAULT_BUDGET).unwrap()[0].degree;
                    assert!(tw <= best, "{name}{params:?}: treewidth {tw} above witness {best}");
                    if tw.max(2) == best || best == 2 {
                        Value::Int(best as u64)
                    } else {
                        Value::Int(u64::MAX)
                    }
                }
                other => panic!("unexpected key {other}"),
            };
            assert_eq!(got, known.value, "{name}{params:?} {key}");
        }
    }
}
