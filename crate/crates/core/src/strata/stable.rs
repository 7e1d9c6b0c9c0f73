//! Stabilization of the curve attached to each vertex of `A` and the
//! dimension of the image of a candidate stratum in each factor.

use std::collections::HashSet;

use super::engine::Candidate;
use super::Factor;

/// `dim M_{g,n}`, and the dimension of the j-line for `g = 1`, `n = 0`.
pub fn dimfun(g: u32, n: u32) -> u64 {
    match g {
        0 => (n as u64).saturating_sub(3),
        1 => (n as u64).max(1),
        _ => 3 * g as u64 - 3 + n as u64,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Port {
    Marked,
    Linked(usize),
    Gone,
}

#[derive(Clone, Debug)]
pub(crate) struct Evaluation {
    /// Surviving components for each vertex of `A`.
    pub survivors: Vec<Vec<usize>>,
    /// Whether the stabilized curve of each vertex of `A` is singular.
    pub nodal: Vec<bool>,
    pub image_dim: Vec<u64>,
}

pub(crate) fn evaluate(c: &Candidate<'_>, factors: &[Factor], a_vertices: usize) -> Evaluation {
    let sk = c.sk;
    let nc = sk.comps.len();
    let mut legs = vec![0u32; nc];
    for g in c.retention {
        for &comp in &g.comps {
            legs[comp] += g.count;
        }
    }
    // ports 2e and 2e+1 are the two sides of source edge e
    let mut ports: Vec<Port> = Vec::with_capacity(2 * sk.edges.len());
    let mut owned: Vec<Vec<usize>> = vec![Vec::new(); nc];
    for (e, edge) in sk.edges.iter().enumerate() {
        let selected = c.selected.contains(&e);
        for side in 0..2 {
            ports.push(if selected {
                Port::Marked
            } else {
                Port::Linked(2 * e + 1 - side)
            });
            owned[edge.ends[side]].push(2 * e + side);
        }
    }
    let mut alive = vec![true; nc];
    loop {
        let unstable = (0..nc).find(|&v| {
            alive[v] && sk.comps[v].genus == 0 && {
                let live = owned[v].iter().filter(|&&p| ports[p] != Port::Gone).count() as u32;
                legs[v] + live <= 2
            }
        });
        let Some(v) = unstable else { break };
        let live: Vec<usize> = owned[v].iter().copied().filter(|&p| ports[p] != Port::Gone).collect();
        match (legs[v], live.as_slice()) {
            (0, [p]) => {
                if let Port::Linked(q) = ports[*p] {
                    ports[q] = Port::Gone;
                }
            }
            (1, [p]) => {
                if let Port::Linked(q) = ports[*p] {
                    ports[q] = Port::Marked;
                }
            }
            (0, [p1, p2]) => match (ports[*p1], ports[*p2]) {
                (Port::Linked(q1), Port::Linked(q2)) if q1 != *p2 => {
                    ports[q1] = Port::Linked(q2);
                    ports[q2] = Port::Linked(q1);
                }
                (Port::Linked(q), Port::Marked) | (Port::Marked, Port::Linked(q)) => {
                    ports[q] = Port::Marked;
                }
                _ => {}
            },
            _ => {}
        }
        for &p in &live {
            ports[p] = Port::Gone;
        }
        alive[v] = false;
    }

    let mut survivors = vec![Vec::new(); a_vertices];
    let mut nodal = vec![false; a_vertices];
    for v in 0..nc {
        if alive[v] {
            survivors[c.a_of[v]].push(v);
            if owned[v].iter().any(|&p| matches!(ports[p], Port::Linked(_))) {
                nodal[c.a_of[v]] = true;
            }
        }
    }
    for a in 0..a_vertices {
        if survivors[a].len() > 1 {
            nodal[a] = true;
        }
    }

    let nt = sk.target.genus.len();
    let image_dim = factors
        .iter()
        .map(|f| {
            let in_f = |v: usize| alive[v] && f.a_vertices.contains(&c.a_of[v]);
            let mut points = vec![0u32; nt];
            let mut source = vec![0u64; nt];
            let mut present = vec![false; nt];
            let mut half_edges: HashSet<(usize, usize)> = HashSet::new();
            for v in (0..nc).filter(|&v| in_f(v)) {
                let t = sk.over[v];
                present[t] = true;
                points[t] += sk.comps[v].branch;
                let special = owned[v].iter().filter(|&&p| ports[p] != Port::Gone).count() as u32;
                source[t] += dimfun(sk.comps[v].genus, legs[v] + special);
                for &p in &owned[v] {
                    let (e, side) = (p / 2, p % 2);
                    if ports[p] != Port::Gone || sk.edges[e].ram > 1 {
                        let h = sk.target.edges[sk.edges[e].target_edge][side];
                        half_edges.insert((h.vertex, h.slot));
                    }
                }
            }
            for g in c.retention {
                if g.comps.iter().any(|&v| in_f(v)) {
                    points[g.vertex] += g.count;
                }
            }
            for (t, _) in &half_edges {
                points[*t] += 1;
            }
            (0..nt)
                .filter(|&t| present[t])
                .map(|t| dimfun(sk.target.genus[t], points[t]).min(source[t]))
                .sum()
        })
        .collect();
    Evaluation {
        survivors,
        nodal,
        image_dim,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_function() {
        assert_eq!(dimfun(0, 3), 0);
        assert_eq!(dimfun(0, 5), 2);
        assert_eq!(dimfun(1, 1), 1);
        assert_eq!(dimfun(1, 11), 11);
        assert_eq!(dimfun(2, 0), 3);
        assert_eq!(dimfun(4, 2), 11);
    }
}
