//! Classification of boundary pullbacks of Hurwitz-space pushforwards.
//!
//! A pullback of a Hurwitz cycle along a gluing map from `A` decomposes over
//! admissible covers carrying an A-structure. Each such stratum is tagged by
//! the first rule that disposes of it: the image is too small, it is
//! supported on a boundary or on a locus with rational or fixed target, or it
//! remains a candidate for a non-tautological contribution.

mod engine;
mod stable;

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::covers::{self, GraphCover, Ramification};
use crate::error::{Error, Result};
use crate::graphs::{AStructure, HalfEdge, StableGraph, Vertex};
use crate::hurwitz::SearchBudget;
use crate::modular::TauTable;

pub use stable::dimfun;

use engine::{Candidate, ShapeKey, Skeleton};

/// Discrete data of a Hurwitz space of degree-`d` covers from genus `g` to
/// genus `h`, with `m2` marked pairs and `md` marked full fibers in the
/// source and `n` further unramified marked points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HurwitzParams {
    pub g: u32,
    pub h: u32,
    pub d: u32,
    pub m2: u32,
    pub md: u32,
    #[serde(default)]
    pub n: u32,
}

impl HurwitzParams {
    pub fn new(g: u32, h: u32, d: u32, m2: u32, md: u32, n: u32) -> Result<Self> {
        let p = HurwitzParams { g, h, d, m2, md, n };
        if d == 0 {
            return Err(Error::invalid("degree must be positive"));
        }
        if p.branch_count() < 0 {
            return Err(Error::invalid(format!(
                "no simple branch points: 2g-2 - d(2h-2) = {} < 0",
                p.branch_count()
            )));
        }
        Ok(p)
    }

    /// Number of simple branch points.
    pub fn branch_count(&self) -> i64 {
        2 * self.g as i64 - 2 - self.d as i64 * (2 * self.h as i64 - 2)
    }

    /// Number of simple ramification points, `(d - 1) b`.
    pub fn ramification_count(&self) -> i64 {
        (self.d as i64 - 1) * self.branch_count()
    }

    /// Dimension of the Hurwitz space.
    pub fn dimension(&self) -> i64 {
        3 * self.h as i64 - 3 + self.branch_count() + self.m2 as i64 + self.md as i64 + self.n as i64
    }
}

impl fmt::Display for HurwitzParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "g={} h={} d={} m2={} md={} n={}",
            self.g, self.h, self.d, self.m2, self.md, self.n
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    #[serde(rename = "zero-by-dimension")]
    ZeroByDimension,
    #[serde(rename = "boundary-supported-TKD")]
    BoundarySupported,
    #[serde(rename = "rational-target-TKD")]
    RationalTarget,
    #[serde(rename = "fixed-target-TKD")]
    FixedTarget,
    #[serde(rename = "split-target-TKD")]
    SplitTarget,
    #[serde(rename = "candidate-nontaut")]
    CandidateNontaut,
}

impl Tag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tag::ZeroByDimension => "zero-by-dimension",
            Tag::BoundarySupported => "boundary-supported-TKD",
            Tag::RationalTarget => "rational-target-TKD",
            Tag::FixedTarget => "fixed-target-TKD",
            Tag::SplitTarget => "split-target-TKD",
            Tag::CandidateNontaut => "candidate-nontaut",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentShape {
    pub genus: u32,
    pub degree: u32,
    pub target_vertex: usize,
    pub a_vertex: usize,
    pub survives: bool,
    pub retained_legs: u32,
}

/// Readable summary of a stratum, indexed like the source vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeSummary {
    pub target_genera: Vec<u32>,
    pub components: Vec<ComponentShape>,
}

impl ShapeSummary {
    /// `(genus, degree, target genus)` of the surviving components over `a`.
    pub fn survivors(&self, a: usize) -> Vec<(u32, u32, u32)> {
        self.components
            .iter()
            .filter(|c| c.survives && c.a_vertex == a)
            .map(|c| (c.genus, c.degree, self.target_genera[c.target_vertex]))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumContribution {
    pub cover: GraphCover,
    pub a_structure: AStructure,
    /// Image dimension in each factor of the product of moduli spaces.
    pub image_dim: Vec<u64>,
    pub required_dim: Vec<u64>,
    #[serde(with = "crate::textnum::biguint")]
    pub multiplicity: BigUint,
    pub tag: Tag,
    pub psi_excess_degree: u32,
    /// The contribution is known only up to a non-zero global constant.
    pub unknown_scalar: bool,
    pub shape: ShapeSummary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DivisorShape {
    /// A genus-0 tail carrying the last marked pair.
    #[serde(rename = "rational-tail")]
    RationalTail,
    /// A genus-1 tail with no markings.
    #[serde(rename = "elliptic-tail")]
    EllipticTail,
}

impl std::str::FromStr for DivisorShape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational-tail" | "rational" => Ok(DivisorShape::RationalTail),
            "elliptic-tail" | "elliptic" => Ok(DivisorShape::EllipticTail),
            other => Err(Error::invalid(format!("unknown divisor shape {other:?}"))),
        }
    }
}

/// Size limits for the classifiers.
#[derive(Clone, Copy, Debug)]
pub struct StrataBounds {
    pub max_genus: u32,
    pub max_degree: u32,
    pub max_candidates: u64,
    pub search: SearchBudget,
}

impl Default for StrataBounds {
    fn default() -> Self {
        StrataBounds {
            max_genus: 4,
            max_degree: 4,
            max_candidates: 50_000_000,
            search: SearchBudget::default(),
        }
    }
}

/// One kind of labeled fiber: the A-vertex receiving each label position,
/// and the labels of every fiber of this kind.
#[derive(Clone, Debug)]
pub(crate) struct Role {
    pub placement: Vec<usize>,
    pub labels: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub(crate) struct Factor {
    pub a_vertices: Vec<usize>,
    pub required: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rule {
    Equal12,
    RationalTail,
    EllipticTail,
    Comb,
}

#[derive(Clone, Debug)]
pub(crate) struct Setup {
    pub params: HurwitzParams,
    pub a: StableGraph,
    pub roles: Vec<Role>,
    pub factors: Vec<Factor>,
    rule: Rule,
    psi_excess: u32,
}

/// Whether the selected edges of `a` map onto every target edge.
pub fn genericity_check(cover: &GraphCover, a: &AStructure) -> bool {
    covers::genericity_holds(cover, a)
}

/// Whether every separating source edge maps to a separating target edge.
pub fn separating_image_check(cover: &GraphCover) -> bool {
    let images = cover.edge_images();
    (0..cover.source.num_edges()).all(|e| {
        !cover.source.is_separating(e)
            || images[e].is_some_and(|t| cover.target.is_separating(t))
    })
}

/// Sum of `tau(d1) tau(d - d1)` over the isogeny-pair shapes of degree `d`.
pub fn pairing_coefficient(d: u64) -> Result<BigInt> {
    if d < 2 {
        return Err(Error::invalid("pairing coefficient needs d >= 2"));
    }
    let t = TauTable::build(d as usize)?;
    let tau = |k: u64| t.get(k as usize).cloned().expect("within bound");
    Ok((1..d).map(|d1| tau(d1) * tau(d - d1)).sum())
}

fn check_bounds(g: u32, d: u32, b: &StrataBounds) -> Result<()> {
    if g > b.max_genus {
        return Err(Error::bound("source genus", g, b.max_genus));
    }
    if d > b.max_degree {
        return Err(Error::bound("cover degree", d, b.max_degree));
    }
    Ok(())
}

fn hypothesis(msg: impl Into<String>) -> Error {
    Error::HypothesisFailed(msg.into())
}

fn pair_labels(j: u32) -> Vec<u32> {
    vec![2 * j - 1, 2 * j]
}

fn tuple_labels(m2: u32, d: u32, k: u32) -> Vec<u32> {
    (1..=d).map(|i| 2 * m2 + (k - 1) * d + i).collect()
}

/// Two genus-1 vertices joined by `g - 1` edges, odd labels on the first.
pub fn equal12_graph(g: u32, m2: u32) -> StableGraph {
    let v0 = Vertex {
        genus: 1,
        legs: (1..=m2).map(|j| 2 * j - 1).collect(),
    };
    let v1 = Vertex {
        genus: 1,
        legs: (1..=m2).map(|j| 2 * j).collect(),
    };
    let pairs: Vec<(usize, usize)> = (1..g).map(|_| (0, 1)).collect();
    StableGraph::from_vertex_pairs(vec![v0, v1], &pairs)
}

pub fn classify_equal12(g: u32, m2: u32, d: u32) -> Result<Vec<StratumContribution>> {
    classify_equal12_with(g, m2, d, &StrataBounds::default())
}

pub fn classify_equal12_with(g: u32, m2: u32, d: u32, bounds: &StrataBounds) -> Result<Vec<StratumContribution>> {
    if g < 2 {
        return Err(hypothesis(format!("g >= 2 required, got g = {g}")));
    }
    if g + m2 != 12 {
        return Err(hypothesis(format!("g + m2 = 12 required, got {}", g + m2)));
    }
    if d < 2 {
        return Err(hypothesis(format!("d >= 2 required, got d = {d}")));
    }
    check_bounds(g, d, bounds)?;
    let params = HurwitzParams::new(g, 1, d, m2, 0, 0)?;
    let setup = Setup {
        params,
        a: equal12_graph(g, m2),
        roles: vec![Role {
            placement: vec![0, 1],
            labels: (1..=m2).map(pair_labels).collect(),
        }],
        factors: vec![Factor {
            a_vertices: vec![0, 1],
            required: 11,
        }],
        rule: Rule::Equal12,
        psi_excess: 0,
    };
    classify(&setup, bounds)
}

pub fn classify_divisor_pullback(params: &HurwitzParams, shape: DivisorShape) -> Result<Vec<StratumContribution>> {
    classify_divisor_pullback_with(params, shape, &StrataBounds::default())
}

pub fn classify_divisor_pullback_with(
    params: &HurwitzParams,
    shape: DivisorShape,
    bounds: &StrataBounds,
) -> Result<Vec<StratumContribution>> {
    let p = HurwitzParams::new(params.g, params.h, params.d, params.m2, params.md, params.n)?;
    if p.n != 0 {
        return Err(hypothesis("unordered marked points are not supported here (n = 0 required)"));
    }
    if p.d < 2 {
        return Err(hypothesis(format!("d >= 2 required, got d = {}", p.d)));
    }
    if p.h < 1 {
        return Err(hypothesis(format!("h >= 1 required, got h = {}", p.h)));
    }
    check_bounds(p.g, p.d, bounds)?;
    let b_total = p.dimension() as u64;
    let tuples = Role {
        placement: vec![0; p.d as usize],
        labels: (1..=p.md).map(|k| tuple_labels(p.m2, p.d, k)).collect(),
    };
    let setup = match shape {
        DivisorShape::RationalTail => {
            if p.m2 < 1 {
                return Err(hypothesis("a rational tail needs a marked pair (m2 >= 1)"));
            }
            let mut main_legs: Vec<u32> = (1..p.m2).flat_map(pair_labels).collect();
            main_legs.extend((1..=p.md).flat_map(|k| tuple_labels(p.m2, p.d, k)));
            let a = StableGraph::from_vertex_pairs(
                vec![
                    Vertex {
                        genus: p.g,
                        legs: main_legs,
                    },
                    Vertex {
                        genus: 0,
                        legs: pair_labels(p.m2),
                    },
                ],
                &[(0, 1)],
            );
            Setup {
                params: p,
                a,
                roles: vec![
                    Role {
                        placement: vec![0, 0],
                        labels: (1..p.m2).map(pair_labels).collect(),
                    },
                    tuples,
                    Role {
                        placement: vec![1, 1],
                        labels: vec![pair_labels(p.m2)],
                    },
                ],
                factors: vec![Factor {
                    a_vertices: vec![0],
                    required: b_total - 1,
                }],
                rule: Rule::RationalTail,
                psi_excess: 0,
            }
        }
        DivisorShape::EllipticTail => {
            if p.h != 1 {
                return Err(hypothesis(format!("an elliptic tail needs h = 1, got h = {}", p.h)));
            }
            if p.g < 2 {
                return Err(hypothesis(format!("an elliptic tail needs g >= 2, got g = {}", p.g)));
            }
            let mut main_legs: Vec<u32> = (1..=p.m2).flat_map(pair_labels).collect();
            main_legs.extend((1..=p.md).flat_map(|k| tuple_labels(p.m2, p.d, k)));
            let a = StableGraph::from_vertex_pairs(
                vec![
                    Vertex {
                        genus: p.g - 1,
                        legs: main_legs,
                    },
                    Vertex {
                        genus: 1,
                        legs: Vec::new(),
                    },
                ],
                &[(0, 1)],
            );
            Setup {
                params: p,
                a,
                roles: vec![
                    Role {
                        placement: vec![0, 0],
                        labels: (1..=p.m2).map(pair_labels).collect(),
                    },
                    tuples,
                ],
                factors: vec![
                    Factor {
                        a_vertices: vec![0],
                        required: b_total.saturating_sub(2),
                    },
                    Factor {
                        a_vertices: vec![1],
                        required: 1,
                    },
                ],
                rule: Rule::EllipticTail,
                psi_excess: 0,
            }
        }
    };
    classify(&setup, bounds)
}

/// Comb of `d` elliptic tails, each carrying one point of each of `s - 1`
/// marked fibers, on a spine of genus `g - d`.
pub fn classify_comb_pullback(params: &HurwitzParams, s: u32) -> Result<Vec<StratumContribution>> {
    classify_comb_pullback_with(params, s, &StrataBounds::default())
}

pub fn classify_comb_pullback_with(
    params: &HurwitzParams,
    s: u32,
    bounds: &StrataBounds,
) -> Result<Vec<StratumContribution>> {
    let p = HurwitzParams::new(params.g, params.h, params.d, params.m2, params.md, params.n)?;
    if p.n != 0 {
        return Err(hypothesis("unordered marked points are not supported here (n = 0 required)"));
    }
    if p.h < 2 {
        return Err(hypothesis(format!("h >= 2 required, got h = {}", p.h)));
    }
    if p.d < 2 {
        return Err(hypothesis(format!("d >= 2 required, got d = {}", p.d)));
    }
    if s < 2 || s + 1 < p.d {
        return Err(hypothesis(format!(
            "s >= max(2, d - 1) required, got s = {s}, d = {}",
            p.d
        )));
    }
    if p.md + 1 < s {
        return Err(hypothesis(format!(
            "md >= s - 1 required, got md = {}, s = {s}",
            p.md
        )));
    }
    if p.g < p.d {
        return Err(hypothesis(format!("g >= d required, got g = {}, d = {}", p.g, p.d)));
    }
    check_bounds(p.g, p.d, bounds)?;
    let d = p.d as usize;
    let spine_tuples = p.md + 1 - s;
    // tail fibers come first, then the spine fibers
    let tail_fiber = |k: u32| tuple_labels(p.m2, p.d, k);
    let spine_fiber = |k: u32| tuple_labels(p.m2, p.d, s - 1 + k);
    let mut spine_legs: Vec<u32> = (1..=p.m2).flat_map(pair_labels).collect();
    spine_legs.extend((1..=spine_tuples).flat_map(spine_fiber));
    let spine_genus = p.g - p.d;
    if 2 * spine_genus as i64 - 2 + d as i64 + spine_legs.len() as i64 <= 0 {
        return Err(hypothesis("the spine of the comb is unstable"));
    }
    let mut vertices = vec![Vertex {
        genus: spine_genus,
        legs: spine_legs,
    }];
    for i in 0..d {
        vertices.push(Vertex {
            genus: 1,
            legs: (1..s).map(|k| tail_fiber(k)[i]).collect(),
        });
    }
    let a = StableGraph::from_vertex_pairs(vertices, &(1..=d).map(|i| (0, i)).collect::<Vec<_>>());
    let setup = Setup {
        params: p,
        a,
        roles: vec![
            Role {
                placement: vec![0, 0],
                labels: (1..=p.m2).map(pair_labels).collect(),
            },
            Role {
                placement: (1..=d).collect(),
                labels: (1..s).map(tail_fiber).collect(),
            },
            Role {
                placement: vec![0; d],
                labels: (1..=spine_tuples).map(spine_fiber).collect(),
            },
        ],
        factors: vec![
            Factor {
                a_vertices: vec![0],
                required: (p.dimension() as u64).saturating_sub(s as u64 + 1),
            },
            Factor {
                a_vertices: (1..=d).collect(),
                required: (s + 1 - p.d) as u64,
            },
        ],
        rule: Rule::Comb,
        psi_excess: s + 1 - p.d,
    };
    classify(&setup, bounds)
}

/// Contributions tagged `candidate-nontaut`.
pub fn candidates(list: &[StratumContribution]) -> Vec<&StratumContribution> {
    list.iter().filter(|c| c.tag == Tag::CandidateNontaut).collect()
}

pub fn contributions_to_json(list: &[StratumContribution]) -> String {
    serde_json::to_string_pretty(list).expect("contributions serialize")
}

fn tag_for(setup: &Setup, c: &Candidate<'_>, ev: &stable::Evaluation) -> Tag {
    if ev
        .image_dim
        .iter()
        .zip(&setup.factors)
        .any(|(dim, f)| *dim < f.required)
    {
        return Tag::ZeroByDimension;
    }
    let sk = c.sk;
    let rational = sk.target.genus.iter().all(|&g| g == 0);
    match setup.rule {
        Rule::Equal12 => {
            if rational {
                return Tag::RationalTarget;
            }
            if ev.nodal[0] || ev.nodal[1] {
                return Tag::BoundarySupported;
            }
            let (s0, s1) = (ev.survivors[0][0], ev.survivors[1][0]);
            if sk.over[s0] != sk.over[s1] {
                return Tag::SplitTarget;
            }
            Tag::CandidateNontaut
        }
        Rule::EllipticTail => {
            if rational {
                return Tag::RationalTarget;
            }
            if ev.survivors[1].iter().any(|&v| sk.target.genus[sk.over[v]] > 0) {
                return Tag::FixedTarget;
            }
            Tag::CandidateNontaut
        }
        Rule::RationalTail | Rule::Comb => {
            if rational {
                Tag::RationalTarget
            } else {
                Tag::CandidateNontaut
            }
        }
    }
}

fn classify(setup: &Setup, bounds: &StrataBounds) -> Result<Vec<StratumContribution>> {
    let (skeletons, found) = engine::run(setup, bounds, |c| {
        let ev = stable::evaluate(c, &setup.factors, setup.a.num_vertices());
        let tag = tag_for(setup, c, &ev);
        let key: (ShapeKey, Tag) = (engine::shape_key(c.sk, c.retention), tag);
        let kept = (c.selected.to_vec(), c.a_of.to_vec(), c.retention.to_vec(), ev);
        Ok(Some((key, kept)))
    })?;
    found
        .into_iter()
        .map(|((_, tag), i, (selected, a_of, retention, ev))| {
            let c = Candidate {
                sk: &skeletons[i],
                selected: &selected,
                a_of: &a_of,
                retention: &retention,
            };
            build(setup, &c, &ev, tag)
        })
        .collect()
}

/// Materializes a labeled cover for a candidate.
fn build(setup: &Setup, c: &Candidate<'_>, ev: &stable::Evaluation, tag: Tag) -> Result<StratumContribution> {
    let sk: &Skeleton = c.sk;
    let nc = sk.comps.len();
    let nt = sk.target.genus.len();
    let max_label = setup.a.all_legs().into_iter().max().unwrap_or(0);
    let mut fresh = max_label.max(999) + 1;
    let mut src_legs: Vec<Vec<u32>> = vec![Vec::new(); nc];
    let mut tgt_legs: Vec<Vec<u32>> = vec![Vec::new(); nt];
    let mut leg_map = std::collections::BTreeMap::new();
    let mut leg_ram = std::collections::BTreeMap::new();
    let mut next_target = 1u32;
    let mut retained: HashMap<u32, u32> = HashMap::new();
    let mut role_next = vec![0usize; setup.roles.len()];
    for t in 0..nt {
        let over_t: Vec<usize> = (0..nc).filter(|&v| sk.over[v] == t).collect();
        // simple branch points, assigned to components in order
        let mut owners: Vec<usize> = Vec::new();
        for &v in &over_t {
            owners.extend(std::iter::repeat_n(v, sk.comps[v].branch as usize));
        }
        for owner in owners {
            let tl = next_target;
            next_target += 1;
            tgt_legs[t].push(tl);
            for &v in &over_t {
                let deg = sk.comps[v].degree;
                let rams: Vec<u32> = if v == owner {
                    std::iter::once(2).chain(std::iter::repeat_n(1, deg as usize - 2)).collect()
                } else {
                    vec![1; deg as usize]
                };
                for r in rams {
                    src_legs[v].push(fresh);
                    leg_map.insert(fresh, tl);
                    leg_ram.insert(fresh, r);
                    fresh += 1;
                }
            }
        }
        for g in c.retention.iter().filter(|g| g.vertex == t) {
            for _ in 0..g.count {
                let labels = &setup.roles[g.role].labels[role_next[g.role]];
                role_next[g.role] += 1;
                let tl = next_target;
                next_target += 1;
                tgt_legs[t].push(tl);
                let mut used = vec![0u32; nc];
                for (pos, &v) in g.comps.iter().enumerate() {
                    src_legs[v].push(labels[pos]);
                    leg_map.insert(labels[pos], tl);
                    leg_ram.insert(labels[pos], 1);
                    retained.insert(labels[pos], labels[pos]);
                    used[v] += 1;
                }
                for &v in &over_t {
                    for _ in used[v]..sk.comps[v].degree {
                        src_legs[v].push(fresh);
                        leg_map.insert(fresh, tl);
                        leg_ram.insert(fresh, 1);
                        fresh += 1;
                    }
                }
            }
        }
    }
    let source = StableGraph::from_vertex_pairs(
        (0..nc)
            .map(|v| Vertex {
                genus: sk.comps[v].genus,
                legs: std::mem::take(&mut src_legs[v]),
            })
            .collect(),
        &sk.edges.iter().map(|e| (e.ends[0], e.ends[1])).collect::<Vec<_>>(),
    );
    let target = StableGraph {
        vertices: (0..nt)
            .map(|t| Vertex {
                genus: sk.target.genus[t],
                legs: std::mem::take(&mut tgt_legs[t]),
            })
            .collect(),
        edges: sk.target.edges.clone(),
    };
    let half_edge_map: Vec<[HalfEdge; 2]> = sk
        .edges
        .iter()
        .map(|e| sk.target.edges[e.target_edge])
        .collect();
    let cover = GraphCover {
        source,
        target,
        vertex_map: sk.over.clone(),
        half_edge_map,
        leg_map,
        degrees: sk.comps.iter().map(|c| c.degree).collect(),
        ramification: Ramification {
            half_edges: sk.edges.iter().map(|e| [e.ram, e.ram]).collect(),
            legs: leg_ram,
        },
    };
    cover
        .validate_connected()
        .map_err(|e| Error::invalid(format!("internal cover failed validation: {e}")))?;
    let a_structure = AStructure::find(&cover.source, &setup.a, c.selected, &retained)
        .ok_or_else(|| Error::invalid("internal cover lost its A-structure"))?;
    let multiplicity = covers::intersection_multiplicity(&cover, &a_structure)?;
    let shape = ShapeSummary {
        target_genera: sk.target.genus.clone(),
        components: (0..nc)
            .map(|v| ComponentShape {
                genus: sk.comps[v].genus,
                degree: sk.comps[v].degree,
                target_vertex: sk.over[v],
                a_vertex: a_structure.vertex_map[v],
                survives: ev.survivors.iter().any(|s| s.contains(&v)),
                retained_legs: c
                    .retention
                    .iter()
                    .map(|g| g.comps.iter().filter(|&&x| x == v).count() as u32 * g.count)
                    .sum(),
            })
            .collect(),
    };
    Ok(StratumContribution {
        cover,
        a_structure,
        image_dim: ev.image_dim.clone(),
        required_dim: setup.factors.iter().map(|f| f.required).collect(),
        multiplicity,
        tag,
        psi_excess_degree: setup.psi_excess,
        unknown_scalar: true,
        shape,
    })
}

#[cfg(test)]
mod tests;
