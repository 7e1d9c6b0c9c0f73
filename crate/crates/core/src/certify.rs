//! Hypothesis checks and replayable reduction certificates.
//!
//! A certificate lists reductions from the requested parameters down to a
//! base case with `g + m2 = 12` on an elliptic target. Each step names the
//! reduction that lifts non-tautologicality from its output back to its
//! input, and the witness is the non-zero coefficient `a_d` of `eta^48`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modular::a_coeff;
use crate::strata::HurwitzParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    #[serde(rename = "h=1")]
    EllipticTarget,
    #[serde(rename = "h>1, d=2")]
    HigherTargetDegreeTwo,
    #[serde(rename = "h>1, d>2")]
    HigherTarget,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::EllipticTarget => "h=1",
            Case::HigherTargetDegreeTwo => "h>1, d=2",
            Case::HigherTarget => "h>1, d>2",
        })
    }
}

/// `lhs >= rhs`, with both sides evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub statement: String,
    pub lhs: i64,
    pub rhs: i64,
}

impl Inequality {
    fn new(statement: &str, lhs: i64, rhs: i64) -> Self {
        Inequality {
            statement: statement.to_string(),
            lhs,
            rhs,
        }
    }

    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} >= {} {}",
            self.statement,
            self.lhs,
            self.rhs,
            if self.holds() { "holds" } else { "fails" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub case: Case,
    pub checks: Vec<Inequality>,
}

impl HypothesisReport {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(Inequality::holds)
    }

    pub fn failures(&self) -> Vec<&Inequality> {
        self.checks.iter().filter(|c| !c.holds()).collect()
    }
}

/// Evaluates the inequalities of the case selected by `h` and `d`.
pub fn check_hypotheses(p: &HurwitzParams) -> Result<HypothesisReport> {
    if p.h < 1 {
        return Err(Error::invalid(format!("target genus must be >= 1, got {}", p.h)));
    }
    if p.d < 2 {
        return Err(Error::invalid(format!("degree must be >= 2, got {}", p.d)));
    }
    let (g, h, d, m2, md) = (p.g as i64, p.h as i64, p.d as i64, p.m2 as i64, p.md as i64);
    Ok(if h == 1 {
        HypothesisReport {
            case: Case::EllipticTarget,
            checks: vec![
                Inequality::new("g >= 2", g, 2),
                Inequality::new("g + m2 >= 12", g + m2, 12),
            ],
        }
    } else if d == 2 {
        HypothesisReport {
            case: Case::HigherTargetDegreeTwo,
            checks: vec![
                Inequality::new("g >= 2h", g, 2 * h),
                Inequality::new("g + m2 >= 2h + 10", g + m2, 2 * h + 10),
                Inequality::new("m2 >= 1", m2, 1),
            ],
        }
    } else {
        HypothesisReport {
            case: Case::HigherTarget,
            checks: vec![
                Inequality::new("g >= d(h-1) + 2", g, d * (h - 1) + 2),
                Inequality::new(
                    "g + m2 + md >= (2d-3)(h-1) + 12",
                    g + m2 + md,
                    (2 * d - 3) * (h - 1) + 12,
                ),
                Inequality::new("md >= (d-3)(h-1) + 1", md, (d - 3) * (h - 1) + 1),
            ],
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepKind {
    /// Forget the marked ramification points.
    ForgetRamification,
    /// Turn one marked full fiber into a marked pair.
    PairToTuple,
    /// Remove one marked pair.
    DropPair,
    /// Pass to the genus `g - 1` piece of an elliptic-tail divisor, which
    /// carries one marked ramification point.
    GenusStep,
    /// Pass to the spine of a comb with `d` elliptic tails.
    CombStep { s: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    #[serde(flatten)]
    pub kind: StepKind,
    pub input: HurwitzParams,
    pub output: HurwitzParams,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Base {
    pub g: u32,
    pub m2: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub d: u32,
    #[serde(with = "crate::textnum::bigint")]
    pub a_d: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub root_params: HurwitzParams,
    pub steps: Vec<Step>,
    pub base: Base,
    pub witness: Witness,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn params(g: u32, h: u32, d: u32, m2: u32, md: u32, n: u32) -> HurwitzParams {
    HurwitzParams { g, h, d, m2, md, n }
}

/// Decreases strictly along every valid step.
fn measure(p: &HurwitzParams) -> (u32, u32, u32, u32, u32) {
    (p.h, p.g, p.n, p.md, p.m2)
}

/// Checks one step: its precondition and its parameter transformation.
pub fn check_step(step: &Step) -> std::result::Result<(), String> {
    let (i, o) = (&step.input, &step.output);
    if o.d != i.d {
        return Err(format!("degree changes from {} to {}", i.d, o.d));
    }
    if i.d < 2 {
        return Err(format!("degree {} < 2", i.d));
    }
    if measure(o) >= measure(i) {
        return Err("step does not decrease (h, g, n, md, m2)".into());
    }
    let expect = |want: HurwitzParams| {
        if *o == want {
            Ok(())
        } else {
            Err(format!("output should be {want}, got {o}"))
        }
    };
    match step.kind {
        StepKind::ForgetRamification => {
            if i.n == 0 {
                return Err("no ramification points to forget".into());
            }
            expect(params(i.g, i.h, i.d, i.m2, i.md, 0))
        }
        StepKind::PairToTuple => {
            if i.md < 1 {
                return Err("md >= 1 required".into());
            }
            expect(params(i.g, i.h, i.d, i.m2 + 1, i.md - 1, i.n))
        }
        StepKind::DropPair => {
            if i.m2 < 1 {
                return Err("m2 >= 1 required".into());
            }
            expect(params(i.g, i.h, i.d, i.m2 - 1, i.md, i.n))
        }
        StepKind::GenusStep => {
            if i.h != 1 || i.md != 0 || i.n != 0 {
                return Err("elliptic target with h = 1, md = 0, n = 0 required".into());
            }
            if i.g <= 12 {
                return Err(format!("g > 12 required, got g = {}", i.g));
            }
            expect(params(i.g - 1, 1, i.d, i.m2, 0, 1))
        }
        StepKind::CombStep { s } => {
            if i.h < 2 {
                return Err(format!("h >= 2 required, got h = {}", i.h));
            }
            if i.n != 0 {
                return Err("n = 0 required".into());
            }
            if s < 2 || s + 1 < i.d {
                return Err(format!("s >= max(2, d-1) required, got s = {s}, d = {}", i.d));
            }
            if i.g < i.d {
                return Err(format!("g >= d required, got g = {}, d = {}", i.g, i.d));
            }
            if i.md + 1 >= s {
                expect(params(i.g - i.d, i.h - 1, i.d, i.m2, i.md + 2 - s, 0))
            } else if i.d == 2 && s == 2 && i.md == 0 && i.m2 >= 1 {
                // a pair is a full fiber in degree 2
                expect(params(i.g - 2, i.h - 1, 2, i.m2 - 1, 1, 0))
            } else {
                Err(format!("md >= s - 1 required, got md = {}, s = {s}", i.md))
            }
        }
    }
}

fn witness_for(d: u32) -> Result<BigInt> {
    a_coeff(d as u64)
}

pub fn build_certificate(p: &HurwitzParams) -> Result<Certificate> {
    let report = check_hypotheses(p)?;
    if !report.passes() {
        let fails: Vec<String> = report.failures().iter().map(|f| f.to_string()).collect();
        return Err(Error::HypothesisFailed(format!(
            "case {}: {}",
            report.case,
            fails.join("; ")
        )));
    }
    let a_d = witness_for(p.d)?;
    if a_d.is_zero() {
        return Err(Error::HypothesisFailed(format!(
            "non-vanishing hypothesis fails: a_{} = 0",
            p.d
        )));
    }
    let mut steps = Vec::new();
    let mut cur = *p;
    let mut push = |kind: StepKind, out: HurwitzParams, cur: &mut HurwitzParams| -> Result<()> {
        let step = Step {
            kind,
            input: *cur,
            output: out,
        };
        check_step(&step).map_err(|e| Error::HypothesisFailed(format!("{kind:?} at {cur}: {e}")))?;
        steps.push(step);
        *cur = out;
        Ok(())
    };
    let c = cur;
    if c.n > 0 {
        push(StepKind::ForgetRamification, params(c.g, c.h, c.d, c.m2, c.md, 0), &mut cur)?;
    }
    while cur.h > 1 {
        let c = cur;
        let s = if c.d == 2 { 2 } else { c.d - 1 };
        let out = if c.d == 2 && c.md == 0 {
            params(c.g - 2, c.h - 1, 2, c.m2 - 1, 1, 0)
        } else {
            params(c.g - c.d, c.h - 1, c.d, c.m2, c.md + 2 - s, 0)
        };
        push(StepKind::CombStep { s }, out, &mut cur)?;
    }
    while cur.md > 0 {
        let c = cur;
        push(StepKind::PairToTuple, params(c.g, c.h, c.d, c.m2 + 1, c.md - 1, c.n), &mut cur)?;
    }
    while cur.g > 12 {
        let c = cur;
        push(StepKind::GenusStep, params(c.g - 1, 1, c.d, c.m2, 0, 1), &mut cur)?;
        let c = cur;
        push(StepKind::ForgetRamification, params(c.g, 1, c.d, c.m2, 0, 0), &mut cur)?;
    }
    while cur.g + cur.m2 > 12 {
        let c = cur;
        push(StepKind::DropPair, params(c.g, c.h, c.d, c.m2 - 1, c.md, c.n), &mut cur)?;
    }
    let cert = Certificate {
        root_params: *p,
        steps,
        base: Base { g: cur.g, m2: cur.m2 },
        witness: Witness { d: p.d, a_d },
    };
    verify_certificate_report(&cert).map_err(Error::HypothesisFailed)?;
    Ok(cert)
}

/// Replays a certificate, naming the first problem found.
pub fn verify_certificate_report(c: &Certificate) -> std::result::Result<(), String> {
    let root = &c.root_params;
    let report = check_hypotheses(root).map_err(|e| e.to_string())?;
    if !report.passes() {
        return Err(format!("root parameters fail case {}", report.case));
    }
    let mut cur = *root;
    for (k, step) in c.steps.iter().enumerate() {
        if step.input != cur {
            return Err(format!("step {k} starts at {} instead of {cur}", step.input));
        }
        check_step(step).map_err(|e| format!("step {k}: {e}"))?;
        cur = step.output;
    }
    let base = params(c.base.g, 1, root.d, c.base.m2, 0, 0);
    if cur != base {
        return Err(format!("chain ends at {cur}, base is {base}"));
    }
    if c.base.g < 2 || c.base.g + c.base.m2 != 12 {
        return Err(format!(
            "base needs g >= 2 and g + m2 = 12, got g = {}, m2 = {}",
            c.base.g, c.base.m2
        ));
    }
    if c.witness.d != root.d {
        return Err(format!("witness degree {} differs from {}", c.witness.d, root.d));
    }
    if c.witness.a_d.is_zero() {
        return Err("witness a_d is zero".into());
    }
    let fresh = witness_for(root.d).map_err(|e| e.to_string())?;
    if fresh != c.witness.a_d {
        return Err(format!("witness a_{} should be {fresh}", root.d));
    }
    Ok(())
}

pub fn verify_certificate(c: &Certificate) -> bool {
    verify_certificate_report(c).is_ok()
}
