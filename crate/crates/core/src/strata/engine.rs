//! Enumeration of admissible covers of a fixed Hurwitz space that carry an
//! A-structure, down to the choice of which fiber points are retained.
//!
//! Work proceeds target-first: connected target skeletons of genus `h`,
//! distributions of branch points and marked fibers, local components over
//! each target vertex (pruned by monodromy realizability), matchings of
//! ports across target edges, edge selections and vertex identifications
//! with `A`, and finally retention of labeled fiber points.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::{Setup, StrataBounds};
use crate::covers::local_cover_count;
use crate::error::{Error, Result};
use crate::graphs::canon::{canonical_order, Encoding};
use crate::graphs::{HalfEdge, StableGraph, UnionFind, Vertex};
use crate::hurwitz::{Perm, RamificationProfile};

#[derive(Clone, Debug)]
pub(crate) struct Target {
    pub genus: Vec<u32>,
    pub edges: Vec<[HalfEdge; 2]>,
    pub valence: Vec<usize>,
    pub branch: Vec<u32>,
    /// `fibers[role][vertex]`: marked fibers of a role over a target vertex.
    pub fibers: Vec<Vec<u32>>,
}

impl Target {
    fn bridges(&self) -> Vec<bool> {
        let n = self.genus.len();
        bridges(n, &self.edges.iter().map(|[a, b]| (a.vertex, b.vertex)).collect::<Vec<_>>())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Comp {
    pub degree: u32,
    pub genus: u32,
    pub branch: u32,
    /// Partition over each half-edge of the target vertex, indexed by slot.
    pub ports: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct SrcEdge {
    /// `ends[i]` lies over side `i` of the target edge.
    pub ends: [usize; 2],
    pub ram: u32,
    pub target_edge: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Skeleton {
    pub target: Target,
    pub comps: Vec<Comp>,
    pub over: Vec<usize>,
    pub edges: Vec<SrcEdge>,
}

/// `count` fibers of `role` over `vertex`, whose label positions are
/// retained on `comps[position]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RetGroup {
    pub role: usize,
    pub vertex: usize,
    pub comps: Vec<usize>,
    pub count: u32,
}

pub(crate) struct Candidate<'a> {
    pub sk: &'a Skeleton,
    pub selected: &'a [usize],
    pub a_of: &'a [usize],
    pub retention: &'a [RetGroup],
}

pub(crate) type ShapeKey = Encoding<(u8, u32, u32, u32), (u8, u32)>;

/// Runs `visit` on every candidate and keeps, per returned key, the value
/// from the first candidate in enumeration order together with the index of
/// its skeleton.
pub(crate) fn run<K, T, F>(setup: &Setup, bounds: &StrataBounds, visit: F) -> Result<(Vec<Skeleton>, Vec<(K, usize, T)>)>
where
    K: Ord + Send,
    T: Send,
    F: Fn(&Candidate<'_>) -> Result<Option<(K, T)>> + Sync,
{
    let skeletons = cover_skeletons(setup, bounds)?;
    let a_bare = strip_legs(&setup.a);
    let seen = AtomicU64::new(0);
    let parts: Vec<BTreeMap<K, ((usize, u64), T)>> = skeletons
        .par_iter()
        .enumerate()
        .map(|(i, sk)| {
            let mut out: BTreeMap<K, ((usize, u64), T)> = BTreeMap::new();
            let mut local = 0u64;
            for_each_candidate(setup, &a_bare, sk, &mut |c| {
                let total = seen.fetch_add(1, Ordering::Relaxed) + 1;
                if total > bounds.max_candidates {
                    return Err(Error::bound("enumerated candidates", total, bounds.max_candidates));
                }
                local += 1;
                if let Some((k, t)) = visit(c)? {
                    out.entry(k).or_insert(((i, local), t));
                }
                Ok(())
            })?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut merged: BTreeMap<K, ((usize, u64), T)> = BTreeMap::new();
    for part in parts {
        for (k, (o, t)) in part {
            match merged.get(&k) {
                Some((o2, _)) if *o2 <= o => {}
                _ => {
                    merged.insert(k, (o, t));
                }
            }
        }
    }
    let found = merged.into_iter().map(|(k, ((i, _), t))| (k, i, t)).collect();
    Ok((skeletons, found))
}

fn strip_legs(g: &StableGraph) -> StableGraph {
    StableGraph {
        vertices: g
            .vertices
            .iter()
            .map(|v| Vertex {
                genus: v.genus,
                legs: Vec::new(),
            })
            .collect(),
        edges: g.edges.clone(),
    }
}

// ---------------------------------------------------------------- targets

/// Connected leg-free multigraphs of genus `h` with `1..=max_edges` edges,
/// one per isomorphism class.
pub(crate) fn target_skeletons(h: u32, max_edges: usize) -> Vec<StableGraph> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for e in 1..=max_edges {
        for nv in 1..=e + 1 {
            let loops = e + 1 - nv;
            if loops as u32 > h {
                continue;
            }
            let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|i| (i..nv).map(move |j| (i, j))).collect();
            for genera in nondecreasing(nv, h - loops as u32) {
                for chosen in multichoose(pairs.len(), e) {
                    let es: Vec<(usize, usize)> = chosen.iter().map(|&k| pairs[k]).collect();
                    let mut uf = UnionFind::new(nv);
                    let mut comps = nv;
                    for &(a, b) in &es {
                        if uf.union(a, b) {
                            comps -= 1;
                        }
                    }
                    if comps != 1 {
                        continue;
                    }
                    let verts = genera
                        .iter()
                        .map(|&g| Vertex {
                            genus: g,
                            legs: Vec::new(),
                        })
                        .collect();
                    let g = StableGraph::from_vertex_pairs(verts, &es);
                    if seen.insert(g.canonical_form()) {
                        out.push(g);
                    }
                }
            }
        }
    }
    out
}

fn nondecreasing(len: usize, sum: u32) -> Vec<Vec<u32>> {
    fn rec(len: usize, sum: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if len == 0 {
            if sum == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut x = min;
        while x as u64 * len as u64 <= sum as u64 {
            cur.push(x);
            rec(len - 1, sum - x, x, cur, out);
            cur.pop();
            x += 1;
        }
    }
    let mut out = Vec::new();
    rec(len, sum, 0, &mut Vec::new(), &mut out);
    out
}

fn multichoose(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// All ways to write `total` as an ordered sum of `parts` non-negative terms.
pub(crate) fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(left - x, parts - 1, cur, out);
            cur.pop();
        }
    }
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

fn bridges(n: usize, edges: &[(usize, usize)]) -> Vec<bool> {
    let base = {
        let mut uf = UnionFind::new(n);
        let mut c = n;
        for &(a, b) in edges {
            if uf.union(a, b) {
                c -= 1;
            }
        }
        c
    };
    (0..edges.len())
        .map(|skip| {
            let mut uf = UnionFind::new(n);
            let mut c = n;
            for (i, &(a, b)) in edges.iter().enumerate() {
                if i != skip && uf.union(a, b) {
                    c -= 1;
                }
            }
            c > base
        })
        .collect()
}

fn targets(setup: &Setup, max_edges: usize) -> Vec<Target> {
    let p = &setup.params;
    let b = p.branch_count() as u32;
    let mut out = Vec::new();
    for sk in target_skeletons(p.h, max_edges) {
        let n = sk.num_vertices();
        let valence = sk.valences();
        let genus: Vec<u32> = sk.vertices.iter().map(|v| v.genus).collect();
        let mut role_options: Vec<Vec<Vec<u32>>> = Vec::new();
        for role in &setup.roles {
            role_options.push(compositions(role.labels.len() as u32, n));
        }
        for branch in compositions(b, n) {
            let mut stack: Vec<Vec<u32>> = Vec::new();
            product_rec(&role_options, 0, &mut stack, &mut |fibers| {
                let stable = (0..n).all(|v| {
                    let legs = branch[v] + fibers.iter().map(|f| f[v]).sum::<u32>();
                    2 * genus[v] as i64 - 2 + valence[v] as i64 + legs as i64 > 0
                });
                if stable {
                    out.push(Target {
                        genus: genus.clone(),
                        edges: sk.edges.clone(),
                        valence: valence.clone(),
                        branch: branch.clone(),
                        fibers: fibers.to_vec(),
                    });
                }
            });
        }
    }
    out
}

fn product_rec<T: Clone>(options: &[Vec<T>], i: usize, cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
    if i == options.len() {
        f(cur);
        return;
    }
    for o in &options[i] {
        cur.push(o.clone());
        product_rec(options, i + 1, cur, f);
        cur.pop();
    }
}

// ------------------------------------------------------- local components

pub(crate) fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for x in (1..=left.min(max)).rev() {
            cur.push(x);
            rec(left - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Connected components that can sit over a target vertex of genus `gt`
/// with `val` half-edges and at most `kmax` simple branch points.
fn local_types(d: u32, gt: u32, val: usize, kmax: u32, gmax: u32, bounds: &StrataBounds) -> Result<Vec<Comp>> {
    let mut out = Vec::new();
    for delta in 1..=d {
        let parts = partitions(delta);
        let options: Vec<Vec<Vec<u32>>> = vec![parts; val];
        let mut combos: Vec<Vec<Vec<u32>>> = Vec::new();
        product_rec(&options, 0, &mut Vec::new(), &mut |c| combos.push(c.to_vec()));
        for ports in combos {
            let ram: i64 = ports.iter().map(|p| delta as i64 - p.len() as i64).sum();
            for k in 0..=kmax {
                if delta == 1 && k > 0 {
                    break;
                }
                let two_g_minus_2 = delta as i64 * (2 * gt as i64 - 2) + k as i64 + ram;
                if two_g_minus_2 < -2 || two_g_minus_2 % 2 != 0 {
                    continue;
                }
                let genus = ((two_g_minus_2 + 2) / 2) as u32;
                if genus > gmax {
                    continue;
                }
                let mut profiles = ports
                    .iter()
                    .map(|p| RamificationProfile::new(p.clone()))
                    .collect::<Result<Vec<_>>>()?;
                for _ in 0..k {
                    profiles.push(RamificationProfile::simple(delta)?);
                }
                if local_cover_count(delta, gt, profiles, &bounds.search)? == num_bigint::BigUint::ZERO {
                    continue;
                }
                out.push(Comp {
                    degree: delta,
                    genus,
                    branch: k,
                    ports: ports.clone(),
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Multisets of local types with total degree `d`, total branch count `k`
/// and total genus at most `gmax`.
fn local_multisets(types: &[Comp], d: u32, k: u32, gmax: u32) -> Vec<Vec<Comp>> {
    fn rec(
        types: &[Comp],
        start: usize,
        d: u32,
        k: u32,
        g: u32,
        cur: &mut Vec<Comp>,
        out: &mut Vec<Vec<Comp>>,
    ) {
        if d == 0 {
            if k == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..types.len() {
            let t = &types[i];
            if t.degree > d || t.branch > k || t.genus > g {
                continue;
            }
            cur.push(t.clone());
            rec(types, i, d - t.degree, k - t.branch, g - t.genus, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(types, 0, d, k, gmax, &mut Vec::new(), &mut out);
    out
}

// ------------------------------------------------------------ skeletons

fn cover_skeletons(setup: &Setup, bounds: &StrataBounds) -> Result<Vec<Skeleton>> {
    let p = &setup.params;
    let mut cache: HashMap<(u32, usize, u32), Vec<Comp>> = HashMap::new();
    let mut out = Vec::new();
    for t in targets(setup, setup.a.num_edges()) {
        let n = t.genus.len();
        let mut per_vertex: Vec<Vec<Vec<Comp>>> = Vec::with_capacity(n);
        for v in 0..n {
            let key = (t.genus[v], t.valence[v], t.branch[v]);
            if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
                let types = local_types(p.d, key.0, key.1, key.2, p.g, bounds)?;
                e.insert(types);
            }
            per_vertex.push(local_multisets(&cache[&key], p.d, t.branch[v], p.g));
        }
        let bridges = t.bridges();
        let mut stack = Vec::new();
        product_rec(&per_vertex, 0, &mut stack, &mut |choice: &[Vec<Comp>]| {
            assemble(setup, &t, &bridges, choice, &mut out);
        });
    }
    Ok(out)
}

fn assemble(setup: &Setup, t: &Target, target_bridges: &[bool], choice: &[Vec<Comp>], out: &mut Vec<Skeleton>) {
    let p = &setup.params;
    let mut comps = Vec::new();
    let mut over = Vec::new();
    let mut first = Vec::new();
    for (v, list) in choice.iter().enumerate() {
        first.push(comps.len());
        for c in list {
            comps.push(c.clone());
            over.push(v);
        }
    }
    let genus_sum: i64 = comps.iter().map(|c| c.genus as i64).sum();
    // each target edge: side multisets must agree
    let mut num_edges = 0i64;
    let mut sides: Vec<[Vec<(usize, u32)>; 2]> = Vec::new();
    for [h1, h2] in &t.edges {
        let side = |h: &HalfEdge| -> Vec<(usize, u32)> {
            let mut s = Vec::new();
            for (i, c) in choice[h.vertex].iter().enumerate() {
                for &r in &c.ports[h.slot] {
                    s.push((first[h.vertex] + i, r));
                }
            }
            s
        };
        let (s1, s2) = (side(h1), side(h2));
        let mut r1: Vec<u32> = s1.iter().map(|x| x.1).collect();
        let mut r2: Vec<u32> = s2.iter().map(|x| x.1).collect();
        r1.sort_unstable();
        r2.sort_unstable();
        if r1 != r2 {
            return;
        }
        num_edges += s1.len() as i64;
        sides.push([s1, s2]);
    }
    if genus_sum + num_edges - comps.len() as i64 + 1 != p.g as i64 {
        return;
    }
    // matchings per target edge and ramification index
    let mut options: Vec<Vec<Vec<SrcEdge>>> = Vec::new();
    for (te, [s1, s2]) in sides.iter().enumerate() {
        let mut rams: Vec<u32> = s1.iter().map(|x| x.1).collect();
        rams.sort_unstable();
        rams.dedup();
        for r in rams {
            let rows = tally(s1.iter().filter(|x| x.1 == r).map(|x| x.0));
            let cols = tally(s2.iter().filter(|x| x.1 == r).map(|x| x.0));
            let mut opts = Vec::new();
            for m in tables(&rows, &cols) {
                let mut es = Vec::new();
                for (i, row) in m.iter().enumerate() {
                    for (j, &c) in row.iter().enumerate() {
                        for _ in 0..c {
                            es.push(SrcEdge {
                                ends: [rows[i].0, cols[j].0],
                                ram: r,
                                target_edge: te,
                            });
                        }
                    }
                }
                opts.push(es);
            }
            options.push(opts);
        }
    }
    product_rec(&options, 0, &mut Vec::new(), &mut |parts: &[Vec<SrcEdge>]| {
        let edges: Vec<SrcEdge> = parts.iter().flatten().copied().collect();
        let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.ends[0], e.ends[1])).collect();
        let mut uf = UnionFind::new(comps.len());
        let mut k = comps.len();
        for &(a, b) in &pairs {
            if uf.union(a, b) {
                k -= 1;
            }
        }
        if k != 1 {
            return;
        }
        let br = bridges(comps.len(), &pairs);
        if edges.iter().zip(&br).any(|(e, &b)| b && !target_bridges[e.target_edge]) {
            return;
        }
        out.push(Skeleton {
            target: t.clone(),
            comps: comps.clone(),
            over: over.clone(),
            edges,
        });
    });
}

fn tally(items: impl Iterator<Item = usize>) -> Vec<(usize, u32)> {
    let mut m: BTreeMap<usize, u32> = BTreeMap::new();
    for i in items {
        *m.entry(i).or_default() += 1;
    }
    m.into_iter().collect()
}

/// Non-negative integer matrices with the given row and column sums.
fn tables(rows: &[(usize, u32)], cols: &[(usize, u32)]) -> Vec<Vec<Vec<u32>>> {
    fn rec(rows: &[(usize, u32)], i: usize, cap: &mut Vec<u32>, cur: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if i == rows.len() {
            if cap.iter().all(|&c| c == 0) {
                out.push(cur.clone());
            }
            return;
        }
        for row in bounded_compositions(rows[i].1, cap) {
            for (c, x) in cap.iter_mut().zip(&row) {
                *c -= x;
            }
            cur.push(row.clone());
            rec(rows, i + 1, cap, cur, out);
            cur.pop();
            for (c, x) in cap.iter_mut().zip(&row) {
                *c += x;
            }
        }
    }
    let mut cap: Vec<u32> = cols.iter().map(|c| c.1).collect();
    let mut out = Vec::new();
    rec(rows, 0, &mut cap, &mut Vec::new(), &mut out);
    out
}

fn bounded_compositions(total: u32, caps: &[u32]) -> Vec<Vec<u32>> {
    compositions(total, caps.len())
        .into_iter()
        .filter(|c| c.iter().zip(caps).all(|(x, m)| x <= m))
        .collect()
}

// ------------------------------------------------ A-structures, retention

fn for_each_candidate(
    setup: &Setup,
    a_bare: &StableGraph,
    sk: &Skeleton,
    f: &mut dyn FnMut(&Candidate<'_>) -> Result<()>,
) -> Result<()> {
    let gamma = StableGraph::from_vertex_pairs(
        sk.comps
            .iter()
            .map(|c| Vertex {
                genus: c.genus,
                legs: Vec::new(),
            })
            .collect(),
        &sk.edges.iter().map(|e| (e.ends[0], e.ends[1])).collect::<Vec<_>>(),
    );
    let ea = a_bare.num_edges();
    let ne = sk.edges.len();
    for selected in combinations(ne, ea) {
        let mut hit = vec![false; sk.target.edges.len()];
        for &e in &selected {
            hit[sk.edges[e].target_edge] = true;
        }
        if !hit.iter().all(|&x| x) {
            continue;
        }
        let mut keep = vec![false; ne];
        for &e in &selected {
            keep[e] = true;
        }
        let c = gamma.contract(&keep);
        for iso in isomorphisms(&c.graph, a_bare) {
            let a_of: Vec<usize> = c.vertex_map.iter().map(|&v| iso[v]).collect();
            retentions(setup, sk, &a_of, &mut |ret| {
                f(&Candidate {
                    sk,
                    selected: &selected,
                    a_of: &a_of,
                    retention: ret,
                })
            })?;
        }
    }
    Ok(())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Every vertex bijection `x -> y` preserving genera and edge multiplicities.
fn isomorphisms(x: &StableGraph, y: &StableGraph) -> Vec<Vec<usize>> {
    let n = x.num_vertices();
    if n != y.num_vertices() || x.num_edges() != y.num_edges() || n > crate::hurwitz::MAX_DEGREE {
        return Vec::new();
    }
    let mult = |g: &StableGraph| {
        let mut m = vec![vec![0u32; n]; n];
        for [a, b] in &g.edges {
            m[a.vertex][b.vertex] += 1;
            if a.vertex != b.vertex {
                m[b.vertex][a.vertex] += 1;
            }
        }
        m
    };
    let (mx, my) = (mult(x), mult(y));
    let mut out = Vec::new();
    for p in Perm::all(n) {
        let map: Vec<usize> = (0..n).map(|i| p.apply(i)).collect();
        if (0..n).all(|i| x.vertices[i].genus == y.vertices[map[i]].genus)
            && (0..n).all(|i| (0..n).all(|j| mx[i][j] == my[map[i]][map[j]]))
        {
            out.push(map);
        }
    }
    out
}

/// Distinct placements of one labeled fiber of `role` over target vertex `v`.
fn fiber_choices(setup: &Setup, sk: &Skeleton, a_of: &[usize], role: usize, v: usize) -> Vec<Vec<usize>> {
    let placement = &setup.roles[role].placement;
    let over_v: Vec<usize> = (0..sk.comps.len()).filter(|&c| sk.over[c] == v).collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    fn rec(
        placement: &[usize],
        over_v: &[usize],
        sk: &Skeleton,
        a_of: &[usize],
        used: &mut Vec<u32>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = cur.len();
        if i == placement.len() {
            out.push(cur.clone());
            return;
        }
        for &c in over_v {
            if a_of[c] != placement[i] || used[c] >= sk.comps[c].degree {
                continue;
            }
            // positions with the same A-vertex are interchangeable
            if let Some(j) = (0..i).rev().find(|&j| placement[j] == placement[i]) {
                if cur[j] > c {
                    continue;
                }
            }
            used[c] += 1;
            cur.push(c);
            rec(placement, over_v, sk, a_of, used, cur, out);
            cur.pop();
            used[c] -= 1;
        }
    }
    let mut used = vec![0u32; sk.comps.len()];
    rec(placement, &over_v, sk, a_of, &mut used, &mut Vec::new(), &mut out);
    out
}

fn retentions(
    setup: &Setup,
    sk: &Skeleton,
    a_of: &[usize],
    f: &mut dyn FnMut(&[RetGroup]) -> Result<()>,
) -> Result<()> {
    // options per (role, vertex) with fibers
    let mut slots: Vec<Vec<Vec<RetGroup>>> = Vec::new();
    for role in 0..setup.roles.len() {
        for v in 0..sk.target.genus.len() {
            let n = sk.target.fibers[role][v];
            if n == 0 {
                continue;
            }
            let choices = fiber_choices(setup, sk, a_of, role, v);
            if choices.is_empty() {
                return Ok(());
            }
            let mut opts = Vec::new();
            for split in compositions(n, choices.len()) {
                opts.push(
                    split
                        .iter()
                        .zip(&choices)
                        .filter(|(k, _)| **k > 0)
                        .map(|(k, c)| RetGroup {
                            role,
                            vertex: v,
                            comps: c.clone(),
                            count: *k,
                        })
                        .collect(),
                );
            }
            slots.push(opts);
        }
    }
    let mut err = None;
    product_rec(&slots, 0, &mut Vec::new(), &mut |parts: &[Vec<RetGroup>]| {
        if err.is_some() {
            return;
        }
        let flat: Vec<RetGroup> = parts.iter().flatten().cloned().collect();
        if let Err(e) = f(&flat) {
            err = Some(e);
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

// ------------------------------------------------------------- shape key

/// Isomorphism invariant of the cover together with its retained fibers,
/// independent of the A-structure.
pub(crate) fn shape_key(sk: &Skeleton, retention: &[RetGroup]) -> ShapeKey {
    let nc = sk.comps.len();
    let nt = sk.target.genus.len();
    let mut colors: Vec<(u8, u32, u32, u32)> = Vec::new();
    let mut edges: Vec<(usize, usize, (u8, u32))> = Vec::new();
    for c in &sk.comps {
        colors.push((0, c.genus, c.degree, c.branch));
    }
    for v in 0..nt {
        colors.push((1, sk.target.genus[v], sk.target.branch[v], 0));
    }
    for (c, &v) in sk.over.iter().enumerate() {
        edges.push((c, nc + v, (2, 0)));
    }
    for e in &sk.edges {
        edges.push((e.ends[0], e.ends[1], (0, e.ram)));
    }
    for [a, b] in &sk.target.edges {
        edges.push((nc + a.vertex, nc + b.vertex, (1, 0)));
    }
    for g in retention {
        let id = colors.len();
        colors.push((2, g.role as u32, g.count, 0));
        edges.push((id, nc + g.vertex, (3, 0)));
        for (pos, &c) in g.comps.iter().enumerate() {
            edges.push((id, c, (4, pos as u32)));
        }
    }
    canonical_order(&colors, &edges).1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_skeleton_counts() {
        // genus 1 with one edge: a loop on a rational vertex, or an edge to a
        // rational vertex from an elliptic one
        assert_eq!(target_skeletons(1, 1).len(), 2);
        // genus 0 with one edge: a single bridge
        assert_eq!(target_skeletons(0, 1).len(), 1);
        // genus 0, two edges: a path on three vertices
        assert_eq!(target_skeletons(0, 2).len(), 2);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn contingency_tables() {
        // 2x2 with margins (1,1),(1,1): identity and swap
        assert_eq!(tables(&[(0, 1), (1, 1)], &[(2, 1), (3, 1)]).len(), 2);
        assert_eq!(tables(&[(0, 2)], &[(1, 1), (2, 1)]).len(), 1);
        assert_eq!(tables(&[(0, 2)], &[(1, 1)]).len(), 0);
    }

    #[test]
    fn bridge_detection() {
        assert_eq!(bridges(3, &[(0, 1), (1, 2)]), vec![true, true]);
        assert_eq!(bridges(2, &[(0, 1), (0, 1)]), vec![false, false]);
        assert_eq!(bridges(2, &[(0, 0), (0, 1)]), vec![false, true]);
    }
}
