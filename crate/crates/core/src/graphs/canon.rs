//! Canonical vertex orderings for small vertex- and edge-colored multigraphs.
//!
//! Individualization and refinement with exhaustive branching. A branch is
//! skipped when swapping its vertex with an already explored one is an
//! automorphism, which keeps twin leaves (identical tails) from blowing up.

use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Encoding<C, L> {
    pub colors: Vec<C>,
    pub edges: Vec<(usize, usize, L)>,
}

/// Returns `order` (canonical position -> vertex) and the encoding under it.
pub fn canonical_order<C, L>(colors: &[C], edges: &[(usize, usize, L)]) -> (Vec<usize>, Encoding<C, L>)
where
    C: Ord + Clone,
    L: Ord + Clone,
{
    let n = colors.len();
    let mut incident: Vec<Vec<(usize, &L)>> = vec![Vec::new(); n];
    for (u, v, l) in edges {
        incident[*u].push((*v, l));
        incident[*v].push((*u, l));
    }
    let ranks = dense_rank(&(0..n).map(|v| &colors[v]).collect::<Vec<_>>());
    let ranks = refine(ranks, &incident);
    let mut best: Option<(Vec<usize>, Encoding<C, L>)> = None;
    search(ranks, colors, edges, &incident, &mut best);
    best.unwrap_or_else(|| {
        (
            Vec::new(),
            Encoding {
                colors: Vec::new(),
                edges: Vec::new(),
            },
        )
    })
}

fn dense_rank<K: Ord>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<&K> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(&k).expect("present"))
        .collect()
}

fn refine<L: Ord>(mut ranks: Vec<usize>, incident: &[Vec<(usize, &L)>]) -> Vec<usize> {
    let mut cells = count_distinct(&ranks);
    loop {
        let sigs: Vec<(usize, Vec<(usize, &L)>)> = (0..ranks.len())
            .map(|v| {
                let mut nb: Vec<(usize, &L)> = incident[v].iter().map(|(w, l)| (ranks[*w], *l)).collect();
                nb.sort();
                (ranks[v], nb)
            })
            .collect();
        let next = dense_rank(&sigs);
        let c = count_distinct(&next);
        ranks = next;
        if c == cells {
            return ranks;
        }
        cells = c;
    }
}

fn count_distinct(r: &[usize]) -> usize {
    let mut v = r.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn search<C, L>(
    ranks: Vec<usize>,
    colors: &[C],
    edges: &[(usize, usize, L)],
    incident: &[Vec<(usize, &L)>],
    best: &mut Option<(Vec<usize>, Encoding<C, L>)>,
) where
    C: Ord + Clone,
    L: Ord + Clone,
{
    let n = ranks.len();
    // first non-singleton cell by rank
    let mut size: HashMap<usize, usize> = HashMap::new();
    for &r in &ranks {
        *size.entry(r).or_default() += 1;
    }
    let target = size.iter().filter(|(_, s)| **s > 1).map(|(r, _)| *r).min();
    let Some(cell) = target else {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| ranks[v]);
        let enc = encode(&order, colors, edges);
        if best.as_ref().is_none_or(|(_, b)| enc < *b) {
            *best = Some((order, enc));
        }
        return;
    };
    let members: Vec<usize> = (0..n).filter(|&v| ranks[v] == cell).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &members {
        if tried.iter().any(|&w| swap_is_automorphism(v, w, edges)) {
            continue;
        }
        tried.push(v);
        let keyed: Vec<(usize, bool)> = (0..n).map(|u| (ranks[u], !(u == v))).collect();
        let r = refine(dense_rank(&keyed), incident);
        search(r, colors, edges, incident, best);
    }
}

fn swap_is_automorphism<L: Ord + Clone>(a: usize, b: usize, edges: &[(usize, usize, L)]) -> bool {
    let sw = |x: usize| if x == a { b } else if x == b { a } else { x };
    let norm = |u: usize, v: usize, l: &L| (u.min(v), u.max(v), l.clone());
    let mut orig: Vec<_> = edges.iter().map(|(u, v, l)| norm(*u, *v, l)).collect();
    let mut moved: Vec<_> = edges.iter().map(|(u, v, l)| norm(sw(*u), sw(*v), l)).collect();
    orig.sort();
    moved.sort();
    orig == moved
}

fn encode<C: Clone, L: Ord + Clone>(order: &[usize], colors: &[C], edges: &[(usize, usize, L)]) -> Encoding<C, L> {
    let mut pos = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut e: Vec<(usize, usize, L)> = edges
        .iter()
        .map(|(u, v, l)| {
            let (a, b) = (pos[*u], pos[*v]);
            (a.min(b), a.max(b), l.clone())
        })
        .collect();
    e.sort();
    Encoding {
        colors: order.iter().map(|&v| colors[v].clone()).collect(),
        edges: e,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeling_invariance() {
        // star with three identical leaves plus a distinguished one
        let colors = vec![0, 1, 1, 1, 2];
        let edges = vec![(0, 1, ()), (0, 2, ()), (0, 3, ()), (0, 4, ()), (4, 4, ())];
        let (_, e1) = canonical_order(&colors, &edges);
        let perm = [3, 0, 4, 2, 1];
        let colors2: Vec<i32> = {
            let mut c = vec![0; 5];
            for v in 0..5 {
                c[perm[v]] = colors[v];
            }
            c
        };
        let edges2: Vec<_> = edges.iter().map(|(u, v, l)| (perm[*u], perm[*v], *l)).collect();
        let (_, e2) = canonical_order(&colors2, &edges2);
        assert_eq!(e1, e2);
    }

    #[test]
    fn path_and_triangle_differ() {
        let c = vec![0, 0, 0];
        let (_, path) = canonical_order(&c, &[(0, 1, ()), (1, 2, ())]);
        let (_, tri) = canonical_order(&c, &[(0, 1, ()), (1, 2, ()), (2, 0, ())]);
        assert_ne!(path, tri);
    }

    #[test]
    fn many_twins_is_fast() {
        let mut colors = vec![0];
        let mut edges = Vec::new();
        for i in 1..=12 {
            colors.push(1);
            edges.push((0, i, ()));
        }
        let (order, _) = canonical_order(&colors, &edges);
        assert_eq!(order.len(), 13);
    }
}
