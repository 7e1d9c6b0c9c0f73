//! Stable graphs: dual graphs of stable marked curves.
//!
//! Vertices carry a genus and a list of globally labeled legs. Edges are
//! unordered pairs of half-edges; a half-edge is addressed by its vertex and
//! a slot, and the slots at each vertex are numbered `0..valence`.

pub mod canon;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub genus: u32,
    #[serde(default)]
    pub legs: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct HalfEdge {
    pub vertex: usize,
    pub slot: usize,
}

impl From<[usize; 2]> for HalfEdge {
    fn from([vertex, slot]: [usize; 2]) -> Self {
        HalfEdge { vertex, slot }
    }
}

impl From<HalfEdge> for [usize; 2] {
    fn from(h: HalfEdge) -> Self {
        [h.vertex, h.slot]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StableGraph {
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub edges: Vec<[HalfEdge; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphViolation {
    #[error("graph has no vertices")]
    Empty,
    #[error("edge {edge} refers to missing vertex {vertex}")]
    MissingVertex { edge: usize, vertex: usize },
    #[error("half-edge slots at vertex {vertex} are not 0..{valence}")]
    BadSlots { vertex: usize, valence: usize },
    #[error("leg label 0 at vertex {vertex}")]
    ZeroLeg { vertex: usize },
    #[error("leg label {label} used twice")]
    DuplicateLeg { label: u32 },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {vertex} of genus {genus} with {special} special points is unstable")]
    Unstable {
        vertex: usize,
        genus: u32,
        special: usize,
    },
}

impl StableGraph {
    /// A single vertex with no edges.
    pub fn smooth(genus: u32, legs: Vec<u32>) -> Self {
        StableGraph {
            vertices: vec![Vertex { genus, legs }],
            edges: Vec::new(),
        }
    }

    /// Build from vertex data and edges given as vertex pairs; slots are
    /// assigned in edge order.
    pub fn from_vertex_pairs(vertices: Vec<Vertex>, pairs: &[(usize, usize)]) -> Self {
        let mut next = vec![0usize; vertices.len()];
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            let a = HalfEdge { vertex: u, slot: next[u] };
            next[u] += 1;
            let b = HalfEdge { vertex: v, slot: next[v] };
            next[v] += 1;
            edges.push([a, b]);
        }
        StableGraph { vertices, edges }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of edge half-edges at each vertex (a loop counts twice).
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertices.len()];
        for e in &self.edges {
            for h in e {
                if h.vertex < val.len() {
                    val[h.vertex] += 1;
                }
            }
        }
        val
    }

    pub fn all_legs(&self) -> Vec<u32> {
        let mut l: Vec<u32> = self.vertices.iter().flat_map(|v| v.legs.iter().copied()).collect();
        l.sort_unstable();
        l
    }

    pub fn leg_vertex(&self, label: u32) -> Option<usize> {
        self.vertices.iter().position(|v| v.legs.contains(&label))
    }

    /// Edge index and side for every half-edge.
    pub fn half_edge_index(&self) -> HashMap<HalfEdge, (usize, usize)> {
        let mut m = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            m.insert(e[0], (i, 0));
            m.insert(e[1], (i, 1));
        }
        m
    }

    pub fn opposite(&self, h: HalfEdge) -> Option<HalfEdge> {
        self.edges.iter().find_map(|e| {
            if e[0] == h {
                Some(e[1])
            } else if e[1] == h {
                Some(e[0])
            } else {
                None
            }
        })
    }

    /// Structural checks without stability or connectivity.
    pub fn validate_structure(&self) -> std::result::Result<(), GraphViolation> {
        if self.vertices.is_empty() {
            return Err(GraphViolation::Empty);
        }
        let n = self.vertices.len();
        let mut slots: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            for h in e {
                if h.vertex >= n {
                    return Err(GraphViolation::MissingVertex {
                        edge: i,
                        vertex: h.vertex,
                    });
                }
                slots[h.vertex].push(h.slot);
            }
        }
        for (v, s) in slots.iter_mut().enumerate() {
            s.sort_unstable();
            if s.iter().enumerate().any(|(i, &x)| i != x) {
                return Err(GraphViolation::BadSlots {
                    vertex: v,
                    valence: s.len(),
                });
            }
        }
        let mut seen = HashSet::new();
        for (v, vert) in self.vertices.iter().enumerate() {
            for &l in &vert.legs {
                if l == 0 {
                    return Err(GraphViolation::ZeroLeg { vertex: v });
                }
                if !seen.insert(l) {
                    return Err(GraphViolation::DuplicateLeg { label: l });
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> std::result::Result<(), GraphViolation> {
        self.validate_structure()?;
        if !self.is_connected() {
            return Err(GraphViolation::Disconnected);
        }
        self.check_stability()
    }

    pub fn check_stability(&self) -> std::result::Result<(), GraphViolation> {
        for (v, (vert, val)) in self.vertices.iter().zip(self.valences()).enumerate() {
            let special = val + vert.legs.len();
            if 2 * vert.genus as i64 - 2 + special as i64 <= 0 {
                return Err(GraphViolation::Unstable {
                    vertex: v,
                    genus: vert.genus,
                    special,
                });
            }
        }
        Ok(())
    }

    /// Connected components as lists of vertices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut uf = UnionFind::new(n);
        for e in &self.edges {
            uf.union(e[0].vertex, e[1].vertex);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// `sum g_v + #E - #V + 1`; for disconnected graphs this is the
    /// arithmetic genus of the disjoint union plus components minus one.
    pub fn total_genus(&self) -> i64 {
        self.vertices.iter().map(|v| v.genus as i64).sum::<i64>() + self.edges.len() as i64
            - self.vertices.len() as i64
            + 1
    }

    /// Whether removing the edge disconnects its component.
    pub fn is_separating(&self, edge: usize) -> bool {
        let [a, b] = self.edges[edge];
        if a.vertex == b.vertex {
            return false;
        }
        let mut uf = UnionFind::new(self.vertices.len());
        for (i, e) in self.edges.iter().enumerate() {
            if i != edge {
                uf.union(e[0].vertex, e[1].vertex);
            }
        }
        uf.find(a.vertex) != uf.find(b.vertex)
    }

    fn colored(&self) -> (Vec<(u32, Vec<u32>)>, Vec<(usize, usize, ())>) {
        let colors = self
            .vertices
            .iter()
            .map(|v| {
                let mut l = v.legs.clone();
                l.sort_unstable();
                (v.genus, l)
            })
            .collect();
        let edges = self.edges.iter().map(|e| (e[0].vertex, e[1].vertex, ())).collect();
        (colors, edges)
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        let (colors, edges) = self.colored();
        let (_, enc) = canon::canonical_order(&colors, &edges);
        CanonicalForm {
            vertices: enc.colors,
            edges: enc.edges.into_iter().map(|(u, v, ())| (u, v)).collect(),
        }
    }

    /// The representative graph with vertices in canonical order.
    pub fn canonical_graph(&self) -> StableGraph {
        self.canonical_form().to_graph()
    }

    /// A vertex bijection `self -> other` preserving genera, legs and edges.
    pub fn isomorphism(&self, other: &StableGraph) -> Option<Vec<usize>> {
        if self.vertices.len() != other.vertices.len() || self.edges.len() != other.edges.len() {
            return None;
        }
        let (c1, e1) = self.colored();
        let (c2, e2) = other.colored();
        let (o1, enc1) = canon::canonical_order(&c1, &e1);
        let (o2, enc2) = canon::canonical_order(&c2, &e2);
        if enc1 != enc2 {
            return None;
        }
        let mut map = vec![0; o1.len()];
        for (a, b) in o1.iter().zip(&o2) {
            map[*a] = *b;
        }
        Some(map)
    }

    /// Contract every edge with `keep[e] == false`.
    pub fn contract(&self, keep: &[bool]) -> Contraction {
        let n = self.vertices.len();
        let mut uf = UnionFind::new(n);
        for (i, e) in self.edges.iter().enumerate() {
            if !keep[i] {
                uf.union(e[0].vertex, e[1].vertex);
            }
        }
        let mut root_index: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..n {
            let r = uf.find(v);
            let next = root_index.len();
            root_index.entry(r).or_insert(next);
        }
        let vertex_map: Vec<usize> = (0..n).map(|v| root_index[&uf.find(v)]).collect();
        let m = root_index.len();
        let mut genus = vec![1i64; m];
        for (v, vert) in self.vertices.iter().enumerate() {
            genus[vertex_map[v]] += vert.genus as i64 - 1;
        }
        let mut legs: Vec<Vec<u32>> = vec![Vec::new(); m];
        for (v, vert) in self.vertices.iter().enumerate() {
            legs[vertex_map[v]].extend(&vert.legs);
        }
        let mut pairs = Vec::new();
        let mut edge_map = vec![None; self.edges.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if keep[i] {
                edge_map[i] = Some(pairs.len());
                pairs.push((vertex_map[e[0].vertex], vertex_map[e[1].vertex]));
            } else {
                genus[vertex_map[e[0].vertex]] += 1;
            }
        }
        let vertices = genus
            .into_iter()
            .zip(legs)
            .map(|(g, mut l)| {
                l.sort_unstable();
                Vertex {
                    genus: g.max(0) as u32,
                    legs: l,
                }
            })
            .collect();
        Contraction {
            graph: StableGraph::from_vertex_pairs(vertices, &pairs),
            vertex_map,
            edge_map,
        }
    }

    /// Keep only legs in `relabel`, renamed accordingly.
    pub fn relabel_legs(&self, relabel: &HashMap<u32, u32>) -> StableGraph {
        let mut g = self.clone();
        for v in &mut g.vertices {
            v.legs = v.legs.iter().filter_map(|l| relabel.get(l).copied()).collect();
            v.legs.sort_unstable();
        }
        g
    }

    /// Number of automorphisms fixing legs, counting half-edge swaps on
    /// loops and permutations of parallel edges.
    pub fn automorphism_count(&self) -> u64 {
        let (colors, edges) = self.colored();
        let n = colors.len();
        let mut mult: HashMap<(usize, usize), u64> = HashMap::new();
        for (u, v, ()) in &edges {
            *mult.entry((*u.min(v), *u.max(v))).or_default() += 1;
        }
        let mut perms = 0u64;
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn rec(
            v: usize,
            colors: &[(u32, Vec<u32>)],
            mult: &HashMap<(usize, usize), u64>,
            image: &mut Vec<usize>,
            used: &mut Vec<bool>,
            count: &mut u64,
        ) {
            let n = colors.len();
            if v == n {
                *count += 1;
                return;
            }
            for w in 0..n {
                if used[w] || colors[w] != colors[v] {
                    continue;
                }
                image[v] = w;
                let ok = (0..=v).all(|u| {
                    let a = mult.get(&(u.min(v), u.max(v))).copied().unwrap_or(0);
                    let (x, y) = (image[u], w);
                    let b = mult.get(&(x.min(y), x.max(y))).copied().unwrap_or(0);
                    a == b
                });
                if ok {
                    used[w] = true;
                    rec(v + 1, colors, mult, image, used, count);
                    used[w] = false;
                }
            }
            image[v] = usize::MAX;
        }
        rec(0, &colors, &mult, &mut image, &mut used, &mut perms);
        let mut edge_factor = 1u64;
        for (&(u, v), &m) in &mult {
            edge_factor *= (1..=m).product::<u64>();
            if u == v {
                edge_factor *= 1 << m;
            }
        }
        perms * edge_factor
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl fmt::Display for StableGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            write!(f, "v{i}[g={}", v.genus)?;
            if !v.legs.is_empty() {
                write!(f, " legs={:?}", v.legs)?;
            }
            write!(f, "] ")?;
        }
        for e in &self.edges {
            write!(f, "{}-{} ", e[0].vertex, e[1].vertex)?;
        }
        Ok(())
    }
}

pub struct Contraction {
    pub graph: StableGraph,
    /// Vertex of the original graph -> vertex of the contracted one.
    pub vertex_map: Vec<usize>,
    /// Surviving edges -> their index after contraction.
    pub edge_map: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub vertices: Vec<(u32, Vec<u32>)>,
    pub edges: Vec<(usize, usize)>,
}

impl CanonicalForm {
    pub fn to_graph(&self) -> StableGraph {
        let vertices = self
            .vertices
            .iter()
            .map(|(g, l)| Vertex {
                genus: *g,
                legs: l.clone(),
            })
            .collect();
        StableGraph::from_vertex_pairs(vertices, &self.edges)
    }
}

/// Identification of a contraction of `gamma` with a fixed graph `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AStructure {
    /// Edge of `A` -> edge of `gamma`.
    pub edge_selection: Vec<usize>,
    /// Vertex of `gamma` -> vertex of `A`.
    pub vertex_map: Vec<usize>,
}

impl AStructure {
    /// Contract the edges of `gamma` outside `selected`, keep the legs named in
    /// `leg_labels` (renamed to labels of `a`), and match the result with `a`.
    pub fn find(
        gamma: &StableGraph,
        a: &StableGraph,
        selected: &[usize],
        leg_labels: &HashMap<u32, u32>,
    ) -> Option<AStructure> {
        if selected.len() != a.num_edges() {
            return None;
        }
        let mut keep = vec![false; gamma.num_edges()];
        for &e in selected {
            *keep.get_mut(e)? = true;
        }
        let c = gamma.contract(&keep);
        let contracted = c.graph.relabel_legs(leg_labels);
        let iso = contracted.isomorphism(a)?;
        let mut used = vec![false; a.num_edges()];
        let mut edge_selection = vec![usize::MAX; a.num_edges()];
        for (ge, ce) in c.edge_map.iter().enumerate() {
            let Some(ce) = ce else { continue };
            let [x, y] = contracted.edges[*ce];
            let (ix, iy) = (iso[x.vertex], iso[y.vertex]);
            let ae = (0..a.num_edges()).find(|&k| {
                let [p, q] = a.edges[k];
                !used[k]
                    && ((p.vertex == ix && q.vertex == iy) || (p.vertex == iy && q.vertex == ix))
            })?;
            used[ae] = true;
            edge_selection[ae] = ge;
        }
        Some(AStructure {
            edge_selection,
            vertex_map: c.vertex_map.iter().map(|&v| iso[v]).collect(),
        })
    }

    pub fn is_selected(&self, edge: usize) -> bool {
        self.edge_selection.contains(&edge)
    }
}

/// Limits for [`enumerate_stable_graphs_with`].
#[derive(Clone, Copy, Debug)]
pub struct EnumerationBound {
    pub max_edges: usize,
}

impl Default for EnumerationBound {
    fn default() -> Self {
        EnumerationBound { max_edges: 6 }
    }
}

pub fn enumerate_stable_graphs(g: u32, n: u32, max_vertices: usize) -> Result<Vec<StableGraph>> {
    enumerate_stable_graphs_with(g, n, max_vertices, &EnumerationBound::default())
}

/// Every stable graph of genus `g` with legs `1..=n` and at most
/// `max_vertices` vertices, one per isomorphism class.
pub fn enumerate_stable_graphs_with(
    g: u32,
    n: u32,
    max_vertices: usize,
    bound: &EnumerationBound,
) -> Result<Vec<StableGraph>> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Ok(Vec::new());
    }
    // stable graphs have at most 2g-2+n vertices
    let v_cap = max_vertices.min((2 * g + n) as usize - 2).max(1);
    let max_e = g as usize + v_cap - 1;
    if max_e > bound.max_edges {
        return Err(Error::bound("edges in enumeration", max_e as u64, bound.max_edges as u64));
    }
    let mut genus_vectors = Vec::new();
    for v in 1..=v_cap {
        nondecreasing(v, g, &mut Vec::new(), &mut genus_vectors);
    }
    let found: Vec<(CanonicalForm, StableGraph)> = genus_vectors
        .par_iter()
        .flat_map_iter(|gv| graphs_with_genera(gv, g, n))
        .collect();
    let mut unique: BTreeMap<CanonicalForm, StableGraph> = BTreeMap::new();
    for (k, gr) in found {
        unique.entry(k).or_insert(gr);
    }
    Ok(unique.into_values().collect())
}

fn nondecreasing(len: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    let lo = cur.last().copied().unwrap_or(0);
    let used: u32 = cur.iter().sum();
    for x in lo..=budget.saturating_sub(used) {
        if used + x > budget {
            break;
        }
        cur.push(x);
        nondecreasing(len, budget, cur, out);
        cur.pop();
    }
}

fn graphs_with_genera(genera: &[u32], g: u32, n: u32) -> Vec<(CanonicalForm, StableGraph)> {
    let v = genera.len();
    let sum: u32 = genera.iter().sum();
    let e = (g + v as u32 - 1 - sum) as usize;
    let pairs: Vec<(usize, usize)> = (0..v).flat_map(|i| (i..v).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut chosen = Vec::with_capacity(e);
    edge_multisets(&pairs, 0, e, &mut chosen, &mut |edges| {
        let mut valence = vec![0usize; v];
        for &(a, b) in edges {
            valence[a] += 1;
            valence[b] += 1;
        }
        // legs still needed for stability
        let need: usize = (0..v)
            .map(|i| (3usize).saturating_sub(2 * genera[i] as usize + valence[i]))
            .sum();
        if need > n as usize {
            return;
        }
        let base = StableGraph::from_vertex_pairs(
            genera.iter().map(|&genus| Vertex { genus, legs: Vec::new() }).collect(),
            edges,
        );
        if !base.is_connected() {
            return;
        }
        let mut assign = vec![0usize; n as usize];
        loop {
            let mut gr = base.clone();
            for (label, &vx) in assign.iter().enumerate() {
                gr.vertices[vx].legs.push(label as u32 + 1);
            }
            if gr.check_stability().is_ok() {
                let k = gr.canonical_form();
                if seen.insert(k.clone()) {
                    out.push((k, gr));
                }
            }
            let mut i = 0;
            while i < assign.len() {
                assign[i] += 1;
                if assign[i] < v {
                    break;
                }
                assign[i] = 0;
                i += 1;
            }
            if i == assign.len() {
                break;
            }
        }
    });
    out
}

fn edge_multisets(
    pairs: &[(usize, usize)],
    start: usize,
    left: usize,
    chosen: &mut Vec<(usize, usize)>,
    visit: &mut impl FnMut(&[(usize, usize)]),
) {
    if left == 0 {
        visit(chosen);
        return;
    }
    for i in start..pairs.len() {
        chosen.push(pairs[i]);
        edge_multisets(pairs, i, left - 1, chosen, visit);
        chosen.pop();
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = x;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests;
