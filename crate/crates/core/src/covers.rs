//! Admissible covers of stable graphs.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::graphs::{AStructure, GraphViolation, HalfEdge, StableGraph};
use crate::hurwitz::{self, MonodromyProblem, RamificationProfile, SearchBudget};

/// Ramification indices: both half-edges of every source edge, and every
/// source leg.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ramification {
    pub half_edges: Vec<[u32; 2]>,
    #[serde(default)]
    pub legs: BTreeMap<u32, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphCover {
    pub source: StableGraph,
    pub target: StableGraph,
    /// Source vertex -> target vertex.
    pub vertex_map: Vec<usize>,
    /// Images of the two half-edges of each source edge, in edge order.
    pub half_edge_map: Vec<[HalfEdge; 2]>,
    /// Source leg label -> target leg label.
    pub leg_map: BTreeMap<u32, u32>,
    /// Degree of the cover at each source vertex.
    pub degrees: Vec<u32>,
    pub ramification: Ramification,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CoverViolation {
    #[error("source graph: {0}")]
    Source(GraphViolation),
    #[error("target graph: {0}")]
    Target(GraphViolation),
    #[error("source is disconnected")]
    DisconnectedSource,
    #[error("{what} has length {got}, expected {expected}")]
    Shape {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("source vertex {vertex} maps to missing target vertex {image}")]
    BadVertexImage { vertex: usize, image: usize },
    #[error("source edge {edge} does not map onto a target edge compatibly")]
    IncompatibleEdge { edge: usize },
    #[error("source leg {leg} has no valid target leg at the image vertex")]
    IncompatibleLeg { leg: u32 },
    #[error("source edge {edge} has ramification {left} and {right} on its two sides")]
    UnequalRamification { edge: usize, left: u32, right: u32 },
    #[error("source leg {leg} has no ramification index")]
    MissingLegRamification { leg: u32 },
    #[error("zero degree or ramification at {location}")]
    Zero { location: String },
    #[error("local degree at source vertex {vertex} over {over}: ramification sums to {sum}, vertex degree {degree}")]
    LocalDegree {
        vertex: usize,
        over: String,
        sum: u32,
        degree: u32,
    },
    #[error("degrees over target vertex {vertex} sum to {sum}, expected {expected}")]
    GlobalDegree { vertex: usize, sum: u32, expected: u32 },
    #[error("Riemann-Hurwitz fails at source vertex {vertex}: 2g-2 = {lhs}, formula gives {rhs}")]
    RiemannHurwitz { vertex: usize, lhs: i64, rhs: i64 },
}

/// Points of the target lying on one target vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TargetPoint {
    HalfEdge(HalfEdge),
    Leg(u32),
}

impl std::fmt::Display for TargetPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TargetPoint::HalfEdge(h) => write!(f, "target half-edge ({}, {})", h.vertex, h.slot),
            TargetPoint::Leg(l) => write!(f, "target leg {l}"),
        }
    }
}

impl GraphCover {
    /// The identity cover of a stable graph.
    pub fn identity(g: &StableGraph) -> Self {
        let legs: BTreeMap<u32, u32> = g.all_legs().into_iter().map(|l| (l, l)).collect();
        GraphCover {
            source: g.clone(),
            target: g.clone(),
            vertex_map: (0..g.num_vertices()).collect(),
            half_edge_map: g.edges.clone(),
            leg_map: legs.clone(),
            degrees: vec![1; g.num_vertices()],
            ramification: Ramification {
                half_edges: vec![[1, 1]; g.num_edges()],
                legs: legs.keys().map(|&l| (l, 1)).collect(),
            },
        }
    }

    /// Global degree, read off target vertex 0.
    pub fn degree(&self) -> u32 {
        self.vertex_map
            .iter()
            .zip(&self.degrees)
            .filter(|(t, _)| **t == 0)
            .map(|(_, d)| *d)
            .sum()
    }

    /// Index of the target edge under each source edge.
    pub fn edge_images(&self) -> Vec<Option<usize>> {
        let idx = self.target.half_edge_index();
        self.half_edge_map
            .iter()
            .map(|h| idx.get(&h[0]).map(|(e, _)| *e))
            .collect()
    }

    fn edge_ram(&self, e: usize) -> u32 {
        self.ramification.half_edges[e][0]
    }

    /// Source points over each target point at the image of `v`, with their
    /// ramification.
    pub fn local_profiles(&self, v: usize) -> BTreeMap<TargetPoint, Vec<u32>> {
        let tv = self.vertex_map[v];
        let mut out: BTreeMap<TargetPoint, Vec<u32>> = BTreeMap::new();
        for e in &self.target.edges {
            for h in e {
                if h.vertex == tv {
                    out.insert(TargetPoint::HalfEdge(*h), Vec::new());
                }
            }
        }
        for &l in &self.target.vertices[tv].legs {
            out.insert(TargetPoint::Leg(l), Vec::new());
        }
        for (i, e) in self.source.edges.iter().enumerate() {
            for side in 0..2 {
                if e[side].vertex == v {
                    let img = self.half_edge_map[i][side];
                    out.entry(TargetPoint::HalfEdge(img))
                        .or_default()
                        .push(self.ramification.half_edges[i][side]);
                }
            }
        }
        for &l in &self.source.vertices[v].legs {
            if let (Some(&t), Some(&r)) = (self.leg_map.get(&l), self.ramification.legs.get(&l)) {
                out.entry(TargetPoint::Leg(t)).or_default().push(r);
            }
        }
        out
    }

    /// Fill in missing leg ramification from the local-degree condition: a
    /// source leg that is the only one at its vertex without an index over its
    /// target leg receives `d_v` minus the indices already present.
    pub fn infer_leg_ramification(&mut self) {
        for (v, vert) in self.source.vertices.iter().enumerate() {
            let mut by_target: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
            for &l in &vert.legs {
                if let Some(&t) = self.leg_map.get(&l) {
                    by_target.entry(t).or_default().push(l);
                }
            }
            for legs in by_target.values() {
                let missing: Vec<u32> = legs
                    .iter()
                    .copied()
                    .filter(|l| !self.ramification.legs.contains_key(l))
                    .collect();
                if missing.len() != 1 {
                    continue;
                }
                let known: u32 = legs.iter().filter_map(|l| self.ramification.legs.get(l)).sum();
                if let Some(r) = self.degrees.get(v).and_then(|d| d.checked_sub(known)) {
                    if r > 0 {
                        self.ramification.legs.insert(missing[0], r);
                    }
                }
            }
        }
    }

    /// Check every condition except connectivity of the source.
    pub fn validate(&self) -> std::result::Result<(), CoverViolation> {
        let s = &self.source;
        let t = &self.target;
        s.validate_structure().map_err(CoverViolation::Source)?;
        s.check_stability().map_err(CoverViolation::Source)?;
        t.validate().map_err(CoverViolation::Target)?;
        let shape = |what, got, expected| {
            if got == expected {
                Ok(())
            } else {
                Err(CoverViolation::Shape { what, got, expected })
            }
        };
        shape("vertex_map", self.vertex_map.len(), s.num_vertices())?;
        shape("degrees", self.degrees.len(), s.num_vertices())?;
        shape("half_edge_map", self.half_edge_map.len(), s.num_edges())?;
        shape("ramification.half_edges", self.ramification.half_edges.len(), s.num_edges())?;

        for (v, &tv) in self.vertex_map.iter().enumerate() {
            if tv >= t.num_vertices() {
                return Err(CoverViolation::BadVertexImage { vertex: v, image: tv });
            }
            if self.degrees[v] == 0 {
                return Err(CoverViolation::Zero {
                    location: format!("source vertex {v}"),
                });
            }
        }
        let target_edges = t.half_edge_index();
        for (i, e) in s.edges.iter().enumerate() {
            let [a, b] = self.half_edge_map[i];
            let ok = e[0].vertex < s.num_vertices()
                && a.vertex == self.vertex_map[e[0].vertex]
                && b.vertex == self.vertex_map[e[1].vertex]
                && match (target_edges.get(&a), target_edges.get(&b)) {
                    (Some((ea, sa)), Some((eb, sb))) => ea == eb && sa != sb,
                    _ => false,
                };
            if !ok {
                return Err(CoverViolation::IncompatibleEdge { edge: i });
            }
            let [ra, rb] = self.ramification.half_edges[i];
            if ra != rb {
                return Err(CoverViolation::UnequalRamification {
                    edge: i,
                    left: ra,
                    right: rb,
                });
            }
            if ra == 0 {
                return Err(CoverViolation::Zero {
                    location: format!("source edge {i}"),
                });
            }
        }
        for (v, vert) in s.vertices.iter().enumerate() {
            for &l in &vert.legs {
                let tv = self.vertex_map[v];
                match self.leg_map.get(&l) {
                    Some(tl) if t.vertices[tv].legs.contains(tl) => {}
                    _ => return Err(CoverViolation::IncompatibleLeg { leg: l }),
                }
                match self.ramification.legs.get(&l) {
                    None => return Err(CoverViolation::MissingLegRamification { leg: l }),
                    Some(0) => {
                        return Err(CoverViolation::Zero {
                            location: format!("source leg {l}"),
                        })
                    }
                    Some(_) => {}
                }
            }
        }

        for v in 0..s.num_vertices() {
            for (point, rams) in self.local_profiles(v) {
                let sum: u32 = rams.iter().sum();
                if sum != self.degrees[v] {
                    return Err(CoverViolation::LocalDegree {
                        vertex: v,
                        over: point.to_string(),
                        sum,
                        degree: self.degrees[v],
                    });
                }
            }
        }

        let mut sums = vec![0u32; t.num_vertices()];
        for (v, &tv) in self.vertex_map.iter().enumerate() {
            sums[tv] += self.degrees[v];
        }
        let expected = sums[0];
        if let Some((vertex, &sum)) = sums.iter().enumerate().find(|(_, s)| **s != expected) {
            return Err(CoverViolation::GlobalDegree { vertex, sum, expected });
        }

        for v in 0..s.num_vertices() {
            let (lhs, rhs) = self.riemann_hurwitz(v);
            if lhs != rhs {
                return Err(CoverViolation::RiemannHurwitz { vertex: v, lhs, rhs });
            }
        }
        Ok(())
    }

    pub fn validate_connected(&self) -> std::result::Result<(), CoverViolation> {
        self.validate()?;
        if !self.source.is_connected() {
            return Err(CoverViolation::DisconnectedSource);
        }
        Ok(())
    }

    /// Both sides of Riemann-Hurwitz at source vertex `v`.
    pub fn riemann_hurwitz(&self, v: usize) -> (i64, i64) {
        let g = self.source.vertices[v].genus as i64;
        let h = self.target.vertices[self.vertex_map[v]].genus as i64;
        let ram: i64 = self
            .local_profiles(v)
            .values()
            .flatten()
            .map(|&r| r as i64 - 1)
            .sum();
        (2 * g - 2, self.degrees[v] as i64 * (2 * h - 2) + ram)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cover serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let mut c: GraphCover = serde_json::from_str(s)?;
        c.infer_leg_ramification();
        Ok(c)
    }
}

/// Connected Hurwitz count of each source vertex's local cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realizability {
    pub per_vertex: Vec<BigUint>,
    pub diagnostics: Vec<String>,
}

impl Realizability {
    pub fn is_realizable(&self) -> bool {
        self.per_vertex.iter().all(|c| *c > BigUint::ZERO)
    }
}

type LocalKey = (u32, u32, Vec<RamificationProfile>);

fn local_cache() -> &'static Mutex<HashMap<LocalKey, BigUint>> {
    static CACHE: OnceLock<Mutex<HashMap<LocalKey, BigUint>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Connected class count of a degree-`d` cover of a genus-`h` curve with the
/// given nontrivial profiles; memoized.
pub fn local_cover_count(
    d: u32,
    h: u32,
    mut profiles: Vec<RamificationProfile>,
    budget: &SearchBudget,
) -> Result<BigUint> {
    profiles.retain(|p| p.branch_order() > 0);
    profiles.sort();
    let key = (d, h, profiles);
    if let Some(c) = local_cache().lock().expect("cache lock").get(&key) {
        return Ok(c.clone());
    }
    let p = MonodromyProblem::new(d, h, key.2.clone(), true)?;
    let c = hurwitz::count_tuples_with(&p, budget)?.classes;
    local_cache().lock().expect("cache lock").insert(key, c.clone());
    Ok(c)
}

pub fn realizable(c: &GraphCover) -> Result<Realizability> {
    realizable_with(c, &SearchBudget::default())
}

pub fn realizable_with(c: &GraphCover, budget: &SearchBudget) -> Result<Realizability> {
    let mut per_vertex = Vec::with_capacity(c.degrees.len());
    let mut diagnostics = Vec::new();
    for v in 0..c.source.num_vertices() {
        let (lhs, rhs) = c.riemann_hurwitz(v);
        if lhs != rhs {
            diagnostics.push(format!(
                "source vertex {v}: Riemann-Hurwitz gives 2g-2 = {rhs}, genus requires {lhs}"
            ));
            per_vertex.push(BigUint::ZERO);
            continue;
        }
        let d = c.degrees[v];
        if d > budget.max_degree {
            return Err(Error::bound(
                format!("degree at source vertex {v}"),
                d,
                budget.max_degree,
            ));
        }
        let profiles = c
            .local_profiles(v)
            .into_values()
            .map(RamificationProfile::new)
            .collect::<Result<Vec<_>>>()?;
        if profiles.iter().any(|p| p.degree() != d) {
            diagnostics.push(format!("source vertex {v}: local degree condition fails"));
            per_vertex.push(BigUint::ZERO);
            continue;
        }
        let h = c.target.vertices[c.vertex_map[v]].genus;
        let count = local_cover_count(d, h, profiles, budget).map_err(|e| match e {
            Error::BoundExceeded { what, value, limit } => Error::BoundExceeded {
                what: format!("{what} at source vertex {v}"),
                value,
                limit,
            },
            other => other,
        })?;
        if count == BigUint::ZERO {
            diagnostics.push(format!("source vertex {v}: no monodromy realizes the local data"));
        }
        per_vertex.push(count);
    }
    Ok(Realizability {
        per_vertex,
        diagnostics,
    })
}

/// `sum (3 g' - 3 + n')` over target vertices, with `extra_marks[v']` added
/// to `n'`.
pub fn stratum_dimension(c: &GraphCover, extra_marks: &[u32]) -> Result<u64> {
    let t = &c.target;
    let val = t.valences();
    let mut total = 0i64;
    for (v, vert) in t.vertices.iter().enumerate() {
        let n = val[v] + vert.legs.len() + extra_marks.get(v).copied().unwrap_or(0) as usize;
        let dim = 3 * vert.genus as i64 - 3 + n as i64;
        if dim < 0 {
            return Err(Error::invalid(format!(
                "target vertex {v} is unstable (3g-3+n = {dim})"
            )));
        }
        total += dim;
    }
    Ok(total as u64)
}

/// Whether the selected source edges cover every target edge.
pub fn genericity_holds(c: &GraphCover, a: &AStructure) -> bool {
    let images = c.edge_images();
    let mut hit = vec![false; c.target.num_edges()];
    for &e in &a.edge_selection {
        if let Some(Some(t)) = images.get(e) {
            hit[*t] = true;
        }
    }
    hit.into_iter().all(|x| x)
}

/// Length of the local ring: product of ramification over source edges the
/// A-structure does not select.
pub fn intersection_multiplicity(c: &GraphCover, a: &AStructure) -> Result<BigUint> {
    if !genericity_holds(c, a) {
        return Err(Error::invalid(
            "selected edges do not surject onto the target edges",
        ));
    }
    let mut m = BigUint::one();
    for e in 0..c.source.num_edges() {
        if !a.is_selected(e) {
            m *= c.edge_ram(e);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Vertex;

    fn v(genus: u32, legs: Vec<u32>) -> Vertex {
        Vertex { genus, legs }
    }

    /// Two genus-1 components, each of degree 1 over a genus-1 target,
    /// joined through `g - 1` degree-2 rational bridges over rational tails
    /// carrying two branch points each. `m2` marked pairs on the elliptic
    /// components, `bridge_ram` on every bridge edge.
    fn isogeny_pair(g: u32, m2: u32, bridge_ram: u32) -> GraphCover {
        let t = (g - 1) as usize;
        // target: Y (0), tails T_j (1..=t)
        let mut tv = vec![v(1, (1..=m2).collect())];
        for j in 0..t {
            let b = m2 + 2 * j as u32 + 1;
            tv.push(v(0, vec![b, b + 1]));
        }
        let tpairs: Vec<(usize, usize)> = (1..=t).map(|j| (0, j)).collect();
        let target = StableGraph::from_vertex_pairs(tv, &tpairs);
        // source: X (0), X' (1), R_j (2..)
        let mut sv = vec![
            v(1, (1..=m2).map(|j| 2 * j - 1).collect()),
            v(1, (1..=m2).map(|j| 2 * j).collect()),
        ];
        let mut leg_map = BTreeMap::new();
        let mut legs_r = BTreeMap::new();
        for j in 1..=m2 {
            leg_map.insert(2 * j - 1, j);
            leg_map.insert(2 * j, j);
            legs_r.insert(2 * j - 1, 1);
            legs_r.insert(2 * j, 1);
        }
        let mut next = 2 * m2 + 1;
        for j in 0..t {
            let b = m2 + 2 * j as u32 + 1;
            sv.push(v(0, vec![next, next + 1]));
            leg_map.insert(next, b);
            leg_map.insert(next + 1, b + 1);
            legs_r.insert(next, 2);
            legs_r.insert(next + 1, 2);
            next += 2;
        }
        let mut spairs = Vec::new();
        for j in 0..t {
            spairs.push((0, 2 + j));
            spairs.push((1, 2 + j));
        }
        let source = StableGraph::from_vertex_pairs(sv, &spairs);
        let mut half_edge_map = Vec::new();
        for (i, e) in source.edges.iter().enumerate() {
            let te = target.edges[i / 2];
            let _ = e;
            // source edge goes elliptic -> bridge, target edge Y -> T
            half_edge_map.push(te);
        }
        let mut vertex_map = vec![0, 0];
        vertex_map.extend(1..=t);
        let mut degrees = vec![1, 1];
        degrees.extend(std::iter::repeat_n(2, t));
        GraphCover {
            source,
            target,
            vertex_map,
            half_edge_map,
            leg_map,
            degrees,
            ramification: Ramification {
                half_edges: vec![[bridge_ram, bridge_ram]; 2 * t],
                legs: legs_r,
            },
        }
    }

    #[test]
    fn identity_covers_validate() {
        for g in crate::graphs::enumerate_stable_graphs(2, 1, 8).unwrap() {
            let c = GraphCover::identity(&g);
            assert_eq!(c.validate(), Ok(()));
            assert!(realizable(&c).unwrap().is_realizable());
            let all = AStructure {
                edge_selection: (0..g.num_edges()).collect(),
                vertex_map: (0..g.num_vertices()).collect(),
            };
            assert_eq!(intersection_multiplicity(&c, &all).unwrap(), BigUint::one());
        }
    }

    #[test]
    fn isogeny_pair_shape() {
        let c = isogeny_pair(4, 8, 1);
        assert_eq!(c.validate_connected(), Ok(()));
        assert_eq!(c.source.total_genus(), 4);
        assert_eq!(c.degree(), 2);
        assert!(realizable(&c).unwrap().is_realizable());
        assert_eq!(stratum_dimension(&c, &[]).unwrap(), 11);
        // one bridge edge per target edge, the rest are contracted
        let a = AStructure {
            edge_selection: vec![0, 2, 4],
            vertex_map: vec![0, 1, 0, 0, 0],
        };
        assert_eq!(intersection_multiplicity(&c, &a).unwrap(), BigUint::one());
        let partial = AStructure {
            edge_selection: vec![0, 1],
            vertex_map: vec![0, 1, 0, 0, 0],
        };
        assert!(intersection_multiplicity(&c, &partial).is_err());
    }

    #[test]
    fn ramified_bridge_breaks_local_degree() {
        let mut c = isogeny_pair(4, 8, 1);
        c.ramification.half_edges[0] = [2, 2];
        assert!(matches!(c.validate(), Err(CoverViolation::LocalDegree { vertex: 0, .. })));
        let c = isogeny_pair(4, 8, 2);
        assert!(matches!(c.validate(), Err(CoverViolation::LocalDegree { .. })));
    }

    #[test]
    fn unequal_sides_rejected() {
        let mut c = isogeny_pair(3, 2, 1);
        c.ramification.half_edges[1] = [1, 2];
        assert!(matches!(
            c.validate(),
            Err(CoverViolation::UnequalRamification { edge: 1, .. })
        ));
    }

    /// One source vertex over one target vertex with a marked unramified fiber.
    fn single_vertex(gs: u32, gt: u32, d: u32) -> GraphCover {
        let legs: Vec<u32> = (1..=d).collect();
        GraphCover {
            source: StableGraph::smooth(gs, legs.clone()),
            target: StableGraph::smooth(gt, vec![1]),
            vertex_map: vec![0],
            half_edge_map: vec![],
            leg_map: legs.iter().map(|&l| (l, 1)).collect(),
            degrees: vec![d],
            ramification: Ramification {
                half_edges: vec![],
                legs: legs.iter().map(|&l| (l, 1)).collect(),
            },
        }
    }

    #[test]
    fn realizability_examples() {
        let ok = single_vertex(1, 1, 2);
        assert_eq!(ok.validate(), Ok(()));
        let r = realizable(&ok).unwrap();
        assert_eq!(r.per_vertex, vec![BigUint::from(3u32)]);
        let bad = single_vertex(0, 1, 2);
        let r = realizable(&bad).unwrap();
        assert!(!r.is_realizable());
        assert!(r.diagnostics[0].contains("Riemann-Hurwitz"));
        assert!(realizable(&single_vertex(1, 1, 7)).unwrap_err().is_refusal());
    }

    #[test]
    fn dimensions() {
        let c = GraphCover::identity(&StableGraph::smooth(1, (1..=11).collect()));
        assert_eq!(stratum_dimension(&c, &[]).unwrap(), 11);
        let c = GraphCover::identity(&StableGraph::smooth(0, vec![1, 2, 3]));
        assert_eq!(stratum_dimension(&c, &[]).unwrap(), 0);
        assert_eq!(stratum_dimension(&c, &[2]).unwrap(), 2);
    }

    #[test]
    fn unramified_multiplicity_is_one() {
        let g = StableGraph::from_vertex_pairs(vec![v(0, vec![1]), v(1, vec![])], &[(0, 0), (0, 1)]);
        let c = GraphCover::identity(&g);
        let a = AStructure {
            edge_selection: vec![0, 1],
            vertex_map: vec![0, 1],
        };
        assert_eq!(intersection_multiplicity(&c, &a).unwrap(), BigUint::one());
    }

    #[test]
    fn global_riemann_hurwitz_from_local() {
        let c = isogeny_pair(4, 3, 1);
        let d = c.degree() as i64;
        let lhs = 2 * c.source.total_genus() - 2;
        let ram: i64 = c
            .ramification
            .half_edges
            .iter()
            .map(|r| r[0] as i64 - 1)
            .sum::<i64>()
            + c.ramification.legs.values().map(|&r| r as i64 - 1).sum::<i64>();
        assert_eq!(lhs, d * (2 * c.target.total_genus() - 2) + ram);
    }

    #[test]
    fn json_round_trip() {
        let c = isogeny_pair(3, 2, 1);
        let text = c.to_json();
        let back = GraphCover::from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn missing_leg_ramification_is_inferred() {
        let mut c = isogeny_pair(3, 2, 1);
        let branch_leg = *c.source.vertices[2].legs.first().unwrap();
        c.ramification.legs.remove(&branch_leg);
        c.ramification.legs.remove(&1);
        let back = GraphCover::from_json(&c.to_json()).unwrap();
        assert_eq!(back.ramification.legs[&branch_leg], 2);
        assert_eq!(back.ramification.legs[&1], 1);
        assert_eq!(back.validate(), Ok(()));
    }

    #[test]
    fn relabeling_preserves_validity() {
        let c = isogeny_pair(3, 2, 1);
        // swap the two elliptic components
        let mut s = c.clone();
        s.source.vertices.swap(0, 1);
        for e in &mut s.source.edges {
            for h in e.iter_mut() {
                h.vertex = match h.vertex {
                    0 => 1,
                    1 => 0,
                    x => x,
                };
            }
        }
        assert_eq!(s.validate(), Ok(()));
    }
}
