//! Hurwitz numbers by monodromy counting in small symmetric groups.
//!
//! Tuples `(a_1, b_1, .., a_h, b_h, s_1, .., s_b)` with
//! `prod [a_i, b_i] * prod s_j = id` and `s_j` of the prescribed cycle type
//! are counted exactly. The search runs as a dynamic program over
//! `(partial product, orbit partition of the partial subgroup)`, so the
//! transitivity requirement is decided without materializing tuples.
//! Isomorphism classes are orbits under simultaneous conjugation, counted
//! with Burnside's lemma: each conjugacy class contributes its size times
//! the number of tuples inside the centralizer of a representative.

mod perm;

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

pub use perm::{Blocks, Perm, MAX_DEGREE};

/// Cycle type of the monodromy around one point, as a partition of the degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RamificationProfile {
    parts: Vec<u32>,
}

impl RamificationProfile {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::invalid(format!("bad ramification profile {parts:?}")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(RamificationProfile { parts })
    }

    /// Unramified fiber of degree `d`.
    pub fn trivial(d: u32) -> Self {
        RamificationProfile {
            parts: vec![1; d as usize],
        }
    }

    /// One simple branch point: `(2, 1, .., 1)`.
    pub fn simple(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::invalid("simple branching needs degree >= 2"));
        }
        let mut parts = vec![2];
        parts.extend(std::iter::repeat_n(1, d as usize - 2));
        Ok(RamificationProfile { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn degree(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `d - (number of preimages)`, the contribution to Riemann-Hurwitz.
    pub fn branch_order(&self) -> u32 {
        self.degree() - self.parts.len() as u32
    }

    /// Parse `"2,1,1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad profile entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl fmt::Display for RamificationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonodromyProblem {
    pub degree: u32,
    pub target_genus: u32,
    pub profiles: Vec<RamificationProfile>,
    pub connected: bool,
}

impl MonodromyProblem {
    pub fn new(
        degree: u32,
        target_genus: u32,
        profiles: Vec<RamificationProfile>,
        connected: bool,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::invalid("degree must be positive"));
        }
        if let Some(p) = profiles.iter().find(|p| p.degree() != degree) {
            return Err(Error::invalid(format!(
                "profile {p} does not sum to degree {degree}"
            )));
        }
        Ok(MonodromyProblem {
            degree,
            target_genus,
            profiles,
            connected,
        })
    }

    /// Parse `"2,1,1;2,1,1"`; the empty string means no profiles.
    pub fn parse_profiles(s: &str) -> Result<Vec<RamificationProfile>> {
        if s.trim().is_empty() {
            return Ok(Vec::new());
        }
        s.split(';').map(RamificationProfile::parse).collect()
    }

    pub fn total_branch_order(&self) -> u32 {
        self.profiles.iter().map(|p| p.branch_order()).sum()
    }

    /// `2g - 2` of the source, summed over components.
    pub fn source_euler_char(&self) -> i64 {
        self.degree as i64 * (2 * self.target_genus as i64 - 2) + self.total_branch_order() as i64
    }

    pub fn tuple_length(&self) -> usize {
        2 * self.target_genus as usize + self.profiles.len()
    }
}

/// Limits on the monodromy search.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_degree: u32,
    pub max_tuple_length: usize,
    /// Rough cap on state transitions of the dynamic program.
    pub max_work: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_degree: 6,
            max_tuple_length: 24,
            max_work: 2_000_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzCount {
    pub degree: u32,
    /// Number of tuples (before dividing by `d!`).
    pub tuples: BigUint,
    /// Orbits of tuples under simultaneous conjugation.
    pub classes: BigUint,
    /// Set when the answer is zero for a structural reason.
    pub diagnostic: Option<String>,
}

impl HurwitzCount {
    fn zero(degree: u32, why: String) -> Self {
        HurwitzCount {
            degree,
            tuples: BigUint::zero(),
            classes: BigUint::zero(),
            diagnostic: Some(why),
        }
    }

    /// Automorphism-weighted count `tuples / d!`.
    pub fn weighted(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.tuples.clone()),
            BigInt::from(factorial(self.degree)),
        )
    }

    pub fn is_positive(&self) -> bool {
        !self.tuples.is_zero()
    }
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

fn bell(n: u32) -> u64 {
    // Bell triangle
    let mut row = vec![1u64];
    for _ in 1..=n {
        let mut next = vec![*row.last().unwrap()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

pub fn count_tuples(p: &MonodromyProblem) -> Result<HurwitzCount> {
    count_tuples_with(p, &SearchBudget::default())
}

pub fn count_tuples_with(p: &MonodromyProblem, budget: &SearchBudget) -> Result<HurwitzCount> {
    let d = p.degree;
    if d == 0 {
        return Err(Error::invalid("degree must be positive"));
    }
    if d > budget.max_degree || d as usize > MAX_DEGREE {
        return Err(Error::bound("degree", d, budget.max_degree.min(MAX_DEGREE as u32)));
    }
    if p.tuple_length() > budget.max_tuple_length {
        return Err(Error::bound(
            "tuple length",
            p.tuple_length() as u64,
            budget.max_tuple_length as u64,
        ));
    }
    if p.total_branch_order() % 2 == 1 {
        return Ok(HurwitzCount::zero(
            d,
            format!(
                "total branch order {} is odd, no tuple has trivial product",
                p.total_branch_order()
            ),
        ));
    }
    if p.connected && p.source_euler_char() < -2 {
        return Ok(HurwitzCount::zero(
            d,
            format!("connected source would have 2g-2 = {}", p.source_euler_char()),
        ));
    }
    let work = estimate_work(p);
    if work > budget.max_work as u128 {
        return Err(Error::bound("monodromy search work", work, budget.max_work));
    }

    let group = Perm::all(d as usize);
    let reps = class_representatives(&group);
    let counts: Vec<(BigUint, BigUint)> = reps
        .par_iter()
        .map(|(rep, size)| {
            let sub: Vec<Perm> = group.iter().copied().filter(|g| g.commutes_with(rep)).collect();
            (count_in_subgroup(p, &sub), BigUint::from(*size))
        })
        .collect();

    let mut tuples = BigUint::zero();
    let mut fixed_sum = BigUint::zero();
    for ((rep, _), (fix, size)) in reps.iter().zip(&counts) {
        if rep.is_identity() {
            tuples = fix.clone();
        }
        fixed_sum += fix * size;
    }
    let classes = fixed_sum / factorial(d);
    let diagnostic = tuples.is_zero().then(|| "no tuple satisfies the constraints".to_string());
    Ok(HurwitzCount {
        degree: d,
        tuples,
        classes,
        diagnostic,
    })
}

fn estimate_work(p: &MonodromyProblem) -> u128 {
    let d = p.degree;
    let order: u128 = (1..=d as u128).product();
    let cap = order * bell(d) as u128;
    let mut states: u128 = 1;
    let mut work: u128 = 0;
    if p.target_genus > 0 {
        // commutator table
        work += order * order;
    }
    let table = (order * order).min(cap);
    for _ in 0..p.target_genus {
        work = work.saturating_add(states.saturating_mul(table));
        states = states.saturating_mul(table).min(cap);
    }
    let n = p.profiles.len();
    for (i, prof) in p.profiles.iter().enumerate() {
        let size = if i + 1 == n { 1 } else { class_size(prof.parts()) };
        work = work.saturating_add(states.saturating_mul(size));
        states = states.saturating_mul(size).min(cap);
    }
    work
}

/// Number of permutations of the given cycle type.
fn class_size(parts: &[u32]) -> u128 {
    let d: u32 = parts.iter().sum();
    let mut denom: u128 = 1;
    let mut mult: HashMap<u32, u32> = HashMap::new();
    for &k in parts {
        denom *= k as u128;
        *mult.entry(k).or_default() += 1;
    }
    for m in mult.values() {
        denom *= (1..=*m as u128).product::<u128>();
    }
    (1..=d as u128).product::<u128>() / denom
}

fn class_representatives(group: &[Perm]) -> Vec<(Perm, u64)> {
    let mut seen: HashMap<Vec<u32>, (Perm, u64)> = HashMap::new();
    for g in group {
        seen.entry(g.cycle_type()).or_insert((*g, 0)).1 += 1;
    }
    let mut out: Vec<_> = seen.into_values().collect();
    out.sort();
    out
}

type State = (Perm, Blocks);

/// Tuples with every entry in `sub` (a subgroup of `S_d`).
fn count_in_subgroup(p: &MonodromyProblem, sub: &[Perm]) -> BigUint {
    let d = p.degree as usize;
    let mut states: HashMap<State, BigUint> = HashMap::new();
    states.insert((Perm::identity(d), Blocks::discrete(d)), BigUint::one());

    if p.target_genus > 0 {
        let mut table: HashMap<State, u64> = HashMap::new();
        for a in sub {
            let ba = Blocks::orbits(a);
            for b in sub {
                let mut blocks = ba;
                blocks.absorb(b);
                *table.entry((Perm::commutator(a, b), blocks)).or_default() += 1;
            }
        }
        for _ in 0..p.target_genus {
            let mut next: HashMap<State, BigUint> = HashMap::with_capacity(states.len());
            for ((prod, blocks), count) in &states {
                for ((c, cb), n) in &table {
                    let key = (prod.then(c), blocks.join(cb));
                    *next.entry(key).or_default() += count * *n;
                }
            }
            states = next;
        }
    }

    let Some((last, init)) = p.profiles.split_last() else {
        return finish(&states, p.connected, |prod| prod.is_identity().then_some(Blocks::discrete(d)));
    };
    for prof in init {
        let choices: Vec<(Perm, Blocks)> = sub
            .iter()
            .filter(|s| s.cycle_type() == prof.parts())
            .map(|s| (*s, Blocks::orbits(s)))
            .collect();
        let mut next: HashMap<State, BigUint> = HashMap::with_capacity(states.len());
        for ((prod, blocks), count) in &states {
            for (s, sb) in &choices {
                *next.entry((prod.then(s), blocks.join(sb))).or_default() += count;
            }
        }
        states = next;
    }
    // The last entry is forced to be the inverse of the partial product.
    let in_sub: std::collections::HashSet<Perm> = sub.iter().copied().collect();
    finish(&states, p.connected, |prod| {
        let s = prod.inverse();
        (in_sub.contains(&s) && s.cycle_type() == last.parts()).then(|| Blocks::orbits(&s))
    })
}

fn finish(
    states: &HashMap<State, BigUint>,
    connected: bool,
    close: impl Fn(&Perm) -> Option<Blocks>,
) -> BigUint {
    let mut total = BigUint::zero();
    for ((prod, blocks), count) in states {
        if let Some(extra) = close(prod) {
            if !connected || blocks.join(&extra).is_single() {
                total += count;
            }
        }
    }
    total
}

/// Connected unbranched degree-`k` covers of a genus-1 curve, up to isomorphism.
pub fn torus_cover_classes(k: u32) -> Result<BigUint> {
    let p = MonodromyProblem::new(k, 1, Vec::new(), true)?;
    Ok(count_tuples(&p)?.classes)
}

/// Tuple count with transitivity dropped, assembled from connected counts by
/// summing over the orbit containing the first point.
pub fn disconnected_from_connected(p: &MonodromyProblem, budget: &SearchBudget) -> Result<BigUint> {
    let mut memo: HashMap<(u32, Vec<RamificationProfile>), BigUint> = HashMap::new();
    assemble(p.degree, p.target_genus, &p.profiles, budget, &mut memo)
}

fn assemble(
    n: u32,
    h: u32,
    profiles: &[RamificationProfile],
    budget: &SearchBudget,
    memo: &mut HashMap<(u32, Vec<RamificationProfile>), BigUint>,
) -> Result<BigUint> {
    if n == 0 {
        return Ok(BigUint::one());
    }
    let key = (n, profiles.to_vec());
    if let Some(v) = memo.get(&key) {
        return Ok(v.clone());
    }
    let mut total = BigUint::zero();
    for k in 1..=n {
        let ways = binomial(n - 1, k - 1);
        // which cycles of each profile live on the block of the first point
        let splits: Vec<Vec<(Vec<u32>, Vec<u32>)>> = profiles
            .iter()
            .map(|prof| sub_multisets_with_sum(prof.parts(), k))
            .collect();
        for choice in cartesian(&splits) {
            let mut inner = Vec::with_capacity(choice.len());
            let mut outer = Vec::with_capacity(choice.len());
            for (a, b) in choice {
                inner.push(RamificationProfile::new(a.clone())?);
                if k < n {
                    outer.push(RamificationProfile::new(b.clone())?);
                }
            }
            let conn = count_tuples_with(&MonodromyProblem::new(k, h, inner, true)?, budget)?.tuples;
            if conn.is_zero() {
                continue;
            }
            let rest = assemble(n - k, h, &outer, budget, memo)?;
            total += &ways * conn * rest;
        }
    }
    memo.insert(key, total.clone());
    Ok(total)
}

fn cartesian<T>(lists: &[Vec<T>]) -> Vec<Vec<&T>> {
    let mut out: Vec<Vec<&T>> = vec![Vec::new()];
    for list in lists {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                list.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

fn binomial(n: u32, k: u32) -> BigUint {
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Distinct sub-multisets of `parts` summing to `k`, with their complements.
fn sub_multisets_with_sum(parts: &[u32], k: u32) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut distinct: Vec<(u32, u32)> = Vec::new();
    for &p in parts {
        match distinct.iter_mut().find(|(v, _)| *v == p) {
            Some(e) => e.1 += 1,
            None => distinct.push((p, 1)),
        }
    }
    let mut out = Vec::new();
    let mut take = vec![0u32; distinct.len()];
    fn rec(
        i: usize,
        left: u32,
        distinct: &[(u32, u32)],
        take: &mut Vec<u32>,
        out: &mut Vec<(Vec<u32>, Vec<u32>)>,
    ) {
        if i == distinct.len() {
            if left == 0 {
                let mut a = Vec::new();
                let mut b = Vec::new();
                for (j, &(v, m)) in distinct.iter().enumerate() {
                    a.extend(std::iter::repeat_n(v, take[j] as usize));
                    b.extend(std::iter::repeat_n(v, (m - take[j]) as usize));
                }
                out.push((a, b));
            }
            return;
        }
        let (v, m) = distinct[i];
        for t in 0..=m {
            if t * v > left {
                break;
            }
            take[i] = t;
            rec(i + 1, left - t * v, distinct, take, out);
        }
        take[i] = 0;
    }
    rec(0, k, &distinct, &mut take, &mut out);
    out
}
