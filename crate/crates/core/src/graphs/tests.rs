use super::*;
use proptest::prelude::*;

type Raw = (Vec<u32>, Vec<Vec<u32>>, Vec<(usize, usize)>);

fn to_graph((genera, legs, edges): &Raw) -> StableGraph {
    let vertices = genera
        .iter()
        .zip(legs)
        .map(|(&genus, l)| {
            let mut l = l.clone();
            l.sort_unstable();
            Vertex { genus, legs: l }
        })
        .collect();
    StableGraph::from_vertex_pairs(vertices, edges)
}

/// Isomorphism by trying every vertex bijection.
fn brute_isomorphic(a: &StableGraph, b: &StableGraph) -> bool {
    let n = a.num_vertices();
    if n != b.num_vertices() || a.num_edges() != b.num_edges() {
        return false;
    }
    let norm = |g: &StableGraph, map: &dyn Fn(usize) -> usize| {
        let mut e: Vec<(usize, usize)> = g
            .edges
            .iter()
            .map(|e| {
                let (x, y) = (map(e[0].vertex), map(e[1].vertex));
                (x.min(y), x.max(y))
            })
            .collect();
        e.sort();
        e
    };
    let target = norm(b, &|x| x);
    crate::hurwitz::Perm::all(n).into_iter().any(|p| {
        (0..n).all(|v| {
            let (x, y) = (&a.vertices[v], &b.vertices[p.apply(v)]);
            let mut lx = x.legs.clone();
            let mut ly = y.legs.clone();
            lx.sort();
            ly.sort();
            x.genus == y.genus && lx == ly
        }) && norm(a, &|x| p.apply(x)) == target
    })
}

/// All one-step degenerations: add a self-loop or split a vertex in two.
fn degenerations(raw: &Raw) -> Vec<Raw> {
    let (genera, legs, edges) = raw;
    let mut out = Vec::new();
    for v in 0..genera.len() {
        if genera[v] >= 1 {
            let mut g2 = genera.clone();
            g2[v] -= 1;
            let mut e2 = edges.clone();
            e2.push((v, v));
            out.push((g2, legs.clone(), e2));
        }
        // ends at v: (edge index, side) plus legs
        let ends: Vec<(usize, usize)> = edges
            .iter()
            .enumerate()
            .flat_map(|(i, &(a, b))| {
                let mut s = Vec::new();
                if a == v {
                    s.push((i, 0));
                }
                if b == v {
                    s.push((i, 1));
                }
                s
            })
            .collect();
        let items = ends.len() + legs[v].len();
        let w = genera.len();
        for mask in 0u32..(1 << items) {
            for g1 in 0..=genera[v] {
                let mut g2 = genera.clone();
                g2[v] = g1;
                g2.push(genera[v] - g1);
                let mut l2 = legs.clone();
                l2[v] = Vec::new();
                l2.push(Vec::new());
                let mut e2 = edges.clone();
                for (k, &(i, side)) in ends.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        if side == 0 {
                            e2[i].0 = w;
                        } else {
                            e2[i].1 = w;
                        }
                    }
                }
                for (k, &l) in legs[v].iter().enumerate() {
                    if mask >> (ends.len() + k) & 1 == 1 {
                        l2[w].push(l);
                    } else {
                        l2[v].push(l);
                    }
                }
                e2.push((v, w));
                let cand = (g2, l2, e2);
                if to_graph(&cand).validate().is_ok() {
                    out.push(cand);
                }
            }
        }
    }
    out
}

fn closure(g: u32, n: u32) -> Vec<StableGraph> {
    let start: Raw = (vec![g], vec![(1..=n).collect()], Vec::new());
    let mut all: Vec<StableGraph> = vec![to_graph(&start)];
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for raw in &frontier {
            for d in degenerations(raw) {
                let gr = to_graph(&d);
                if !all.iter().any(|x| brute_isomorphic(x, &gr)) {
                    all.push(gr);
                    next.push(d);
                }
            }
        }
        frontier = next;
    }
    all
}

fn graph(vs: &[(u32, &[u32])], pairs: &[(usize, usize)]) -> StableGraph {
    StableGraph::from_vertex_pairs(
        vs.iter()
            .map(|(g, l)| Vertex {
                genus: *g,
                legs: l.to_vec(),
            })
            .collect(),
        pairs,
    )
}

#[test]
fn validation_examples() {
    assert!(StableGraph::smooth(1, vec![1]).validate().is_ok());
    assert!(matches!(
        StableGraph::smooth(0, vec![1, 2]).validate(),
        Err(GraphViolation::Unstable { .. })
    ));
    let legs_a: Vec<u32> = (1..=11).collect();
    let legs_b: Vec<u32> = (12..=22).collect();
    let g = graph(&[(1, &legs_a), (1, &legs_b)], &[(0, 1)]);
    assert!(g.validate().is_ok());
    assert_eq!(g.total_genus(), 2);
    let disconnected = graph(&[(1, &[1]), (1, &[2])], &[]);
    assert_eq!(disconnected.validate(), Err(GraphViolation::Disconnected));
    assert!(matches!(
        graph(&[(1, &[1, 1])], &[]).validate(),
        Err(GraphViolation::DuplicateLeg { label: 1 })
    ));
    let mut bad = graph(&[(1, &[]), (1, &[])], &[(0, 1)]);
    bad.edges[0][0].slot = 3;
    assert!(matches!(bad.validate(), Err(GraphViolation::BadSlots { .. })));
}

#[test]
fn genus_examples() {
    assert_eq!(StableGraph::smooth(3, vec![]).total_genus(), 3);
    assert_eq!(graph(&[(1, &[]), (1, &[])], &[(0, 1), (0, 1), (0, 1)]).total_genus(), 4);
    assert_eq!(graph(&[(0, &[1])], &[(0, 0)]).total_genus(), 1);
}

#[test]
fn canonical_form_examples() {
    let a = graph(&[(1, &[1]), (1, &[2])], &[(0, 1)]);
    let b = graph(&[(1, &[2]), (1, &[1])], &[(1, 0)]);
    assert_eq!(a.canonical_form(), b.canonical_form());
    let sym = graph(&[(1, &[]), (1, &[])], &[(0, 1)]);
    let swapped = graph(&[(1, &[]), (1, &[])], &[(1, 0)]);
    assert_eq!(sym.canonical_form(), swapped.canonical_form());
    let path = graph(&[(1, &[]), (1, &[]), (1, &[])], &[(0, 1), (1, 2)]);
    let tri = graph(&[(1, &[]), (1, &[]), (1, &[])], &[(0, 1), (1, 2), (2, 0)]);
    assert_ne!(path.canonical_form(), tri.canonical_form());
}

#[test]
fn enumeration_counts() {
    assert_eq!(enumerate_stable_graphs(0, 3, 6).unwrap().len(), 1);
    assert_eq!(enumerate_stable_graphs(1, 1, 6).unwrap().len(), 2);
    assert_eq!(enumerate_stable_graphs(2, 0, 6).unwrap().len(), 7);
}

#[test]
fn enumeration_matches_degeneration_closure() {
    for (g, n) in [(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0)] {
        let listed = enumerate_stable_graphs(g, n, 8).unwrap();
        let oracle = closure(g, n);
        assert_eq!(listed.len(), oracle.len(), "(g, n) = ({g}, {n})");
        for gr in &listed {
            assert!(gr.validate().is_ok());
            assert_eq!(gr.total_genus(), g as i64);
            assert!(oracle.iter().any(|o| brute_isomorphic(o, gr)));
        }
    }
}

#[test]
fn canonical_form_agrees_with_bijection_search() {
    let mut all = Vec::new();
    for (g, n) in [(0, 4), (1, 2), (2, 0), (1, 3), (2, 1)] {
        all.extend(closure(g, n));
    }
    let small: Vec<_> = all
        .into_iter()
        .filter(|gr| 2 * gr.num_edges() + gr.all_legs().len() <= 6)
        .collect();
    for a in &small {
        for b in &small {
            assert_eq!(
                a.canonical_form() == b.canonical_form(),
                brute_isomorphic(a, b),
                "{a} vs {b}"
            );
        }
    }
}

#[test]
fn enumeration_refuses_large_sizes() {
    let err = enumerate_stable_graphs(4, 0, 6).unwrap_err();
    assert!(err.is_refusal());
    assert!(enumerate_stable_graphs(4, 0, 2).is_ok());
}

#[test]
fn json_round_trip_is_bit_exact() {
    for gr in enumerate_stable_graphs(2, 1, 8).unwrap() {
        let c = gr.canonical_graph();
        let text = c.to_json();
        let back = StableGraph::from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.canonical_graph(), c);
    }
    let parsed = StableGraph::from_json(
        r#"{"vertices":[{"genus":1,"legs":[1]},{"genus":1}],"edges":[[[0,0],[1,0]]]}"#,
    )
    .unwrap();
    assert!(parsed.validate().is_ok());
    assert!(StableGraph::from_json("{\"vertices\": 3}").is_err());
}

#[test]
fn contraction_and_a_structure() {
    // genus-1 vertices joined by two edges through a middle genus-0 vertex
    let g = graph(&[(1, &[1]), (0, &[]), (1, &[2])], &[(0, 1), (1, 2), (0, 2)]);
    let c = g.contract(&[false, true, true]);
    assert_eq!(c.graph.num_vertices(), 2);
    assert_eq!(c.graph.total_genus(), g.total_genus());
    let a = graph(&[(1, &[1]), (1, &[2])], &[(0, 1), (0, 1)]);
    let s = AStructure::find(&g, &a, &[1, 2], &HashMap::from([(1, 1), (2, 2)])).unwrap();
    assert_eq!(s.vertex_map[0], 0);
    assert_eq!(s.vertex_map[2], 1);
    let mut sel = s.edge_selection.clone();
    sel.sort();
    assert_eq!(sel, vec![1, 2]);
    assert!(AStructure::find(&g, &a, &[0, 1], &HashMap::from([(1, 1), (2, 2)])).is_none());
}

#[test]
fn automorphisms() {
    assert_eq!(graph(&[(0, &[1])], &[(0, 0)]).automorphism_count(), 2);
    assert_eq!(graph(&[(1, &[]), (1, &[])], &[(0, 1)]).automorphism_count(), 2);
    assert_eq!(graph(&[(0, &[]), (0, &[])], &[(0, 1), (0, 1), (0, 1)]).automorphism_count(), 12);
}

#[test]
fn separating_edges() {
    let g = graph(&[(1, &[1]), (0, &[]), (1, &[2])], &[(0, 1), (1, 2), (1, 1)]);
    assert!(g.is_separating(0));
    assert!(g.is_separating(1));
    assert!(!g.is_separating(2));
}

proptest! {
    #[test]
    fn canonical_form_ignores_vertex_order(idx in 0usize..18, seed in any::<u64>()) {
        let graphs = enumerate_stable_graphs(1, 3, 8).unwrap();
        let gr = &graphs[idx % graphs.len()];
        let n = gr.num_vertices();
        let perms = crate::hurwitz::Perm::all(n);
        let p = perms[(seed as usize) % perms.len()];
        let inv = p.inverse();
        let vertices = (0..n).map(|i| gr.vertices[inv.apply(i)].clone()).collect();
        let pairs: Vec<_> = gr.edges.iter().rev().map(|e| (p.apply(e[1].vertex), p.apply(e[0].vertex))).collect();
        let moved = StableGraph::from_vertex_pairs(vertices, &pairs);
        prop_assert_eq!(moved.canonical_form(), gr.canonical_form());
    }
}
