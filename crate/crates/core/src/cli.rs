//! Command-line front end.
//!
//! Exit status is 0 on success, 1 when a computation is refused (a bound is
//! exceeded or a hypothesis fails) and 2 on malformed input.
//!
//! Default bounds can be overridden through `HURWITZ_CYCLES_BOUNDS`, a comma
//! separated list of `key=value` with keys `monodromy-degree`, `monodromy-work`,
//! `strata-genus`, `strata-degree` and `strata-candidates`. Flags win over the
//! environment.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::certify::{self, Certificate};
use crate::covers::{self, GraphCover};
use crate::error::{Error, Result};
use crate::graphs::AStructure;
use crate::hurwitz::{self, MonodromyProblem, SearchBudget};
use crate::lattice;
use crate::modular::{self, ScanTable};
use crate::strata::{self, DivisorShape, HurwitzParams, StrataBounds};

pub const BOUNDS_VAR: &str = "HURWITZ_CYCLES_BOUNDS";

#[derive(Parser, Debug)]
#[command(name = "hurwitz-cycles", version, about = "Exact computations around Hurwitz cycles on moduli of curves")]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ramanujan tau(d).
    Tau { d: u64 },
    /// Coefficient a_d of eta^48.
    Ad { d: u64 },
    /// Indices d <= max with tau(d) = 0, one per line.
    ScanTau { max: u64 },
    /// Indices d <= max with a_d = 0, one per line.
    ScanAd { max: u64 },
    /// Check T_k(eta^24) = tau(k) eta^24 at the given precision.
    HeckeCheck { k: u64, prec: usize },
    /// Index-k sublattices of Z^2 in Hermite normal form.
    Sublattices { k: u64 },
    /// Smith normal forms of index-k sublattices.
    IsogenyComponents { k: u64 },
    /// Count monodromy tuples for a branched cover.
    Hurwitz(HurwitzArgs),
    /// Check a cover file.
    ValidateCover { file: PathBuf },
    /// Dimension of the stratum of a cover file.
    CoverDim { file: PathBuf },
    /// Local multiplicity of a cover for a choice of selected source edges.
    CoverMult {
        file: PathBuf,
        /// Comma separated source edge indices.
        #[arg(long, value_delimiter = ',')]
        a_edges: Vec<usize>,
    },
    /// Classify the pullback to the product of two M_{1,11}.
    ClassifyEqual12 {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        m2: u32,
        #[arg(long)]
        d: u32,
        #[command(flatten)]
        bounds: StrataArgs,
    },
    /// Classify the pullback to a divisor with a rational or elliptic tail.
    ClassifyDivisor {
        #[arg(long)]
        shape: DivisorShape,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        bounds: StrataArgs,
    },
    /// Classify the pullback to a comb with d elliptic tails.
    ClassifyComb {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        s: u32,
        #[command(flatten)]
        bounds: StrataArgs,
    },
    /// Build a reduction certificate.
    Certify {
        #[command(flatten)]
        params: ParamArgs,
        /// Write the certificate here instead of standard output.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Replay a certificate file.
    Verify { file: PathBuf },
}

#[derive(Args, Debug)]
struct HurwitzArgs {
    #[arg(long)]
    degree: u32,
    #[arg(long)]
    target_genus: u32,
    /// Profiles separated by ';', parts by ','.
    #[arg(long, default_value = "")]
    profiles: String,
    #[arg(long)]
    connected: bool,
    #[arg(long)]
    max_degree: Option<u32>,
    #[arg(long)]
    max_work: Option<u64>,
}

#[derive(Args, Debug)]
struct ParamArgs {
    #[arg(long)]
    g: u32,
    #[arg(long)]
    h: u32,
    #[arg(long)]
    d: u32,
    #[arg(long, default_value_t = 0)]
    m2: u32,
    #[arg(long, default_value_t = 0)]
    md: u32,
    #[arg(long, default_value_t = 0)]
    n: u32,
}

impl ParamArgs {
    fn params(&self) -> Result<HurwitzParams> {
        HurwitzParams::new(self.g, self.h, self.d, self.m2, self.md, self.n)
    }
}

#[derive(Args, Debug)]
struct StrataArgs {
    #[arg(long)]
    max_genus: Option<u32>,
    #[arg(long)]
    max_degree: Option<u32>,
    #[arg(long)]
    max_candidates: Option<u64>,
    /// Print only contributions tagged candidate-nontaut.
    #[arg(long)]
    candidates_only: bool,
}

#[derive(Default, Debug, PartialEq, Eq)]
struct EnvBounds {
    monodromy_degree: Option<u32>,
    monodromy_work: Option<u64>,
    strata_genus: Option<u32>,
    strata_degree: Option<u32>,
    strata_candidates: Option<u64>,
}

fn parse_env_bounds(s: &str) -> Result<EnvBounds> {
    let mut b = EnvBounds::default();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{BOUNDS_VAR}: expected key=value, got {item:?}")))?;
        let bad = || Error::Parse(format!("{BOUNDS_VAR}: {k} needs an unsigned integer, got {v:?}"));
        match k.trim() {
            "monodromy-degree" => b.monodromy_degree = Some(v.trim().parse().map_err(|_| bad())?),
            "monodromy-work" => b.monodromy_work = Some(v.trim().parse().map_err(|_| bad())?),
            "strata-genus" => b.strata_genus = Some(v.trim().parse().map_err(|_| bad())?),
            "strata-degree" => b.strata_degree = Some(v.trim().parse().map_err(|_| bad())?),
            "strata-candidates" => b.strata_candidates = Some(v.trim().parse().map_err(|_| bad())?),
            other => return Err(Error::Parse(format!("{BOUNDS_VAR}: unknown key {other:?}"))),
        }
    }
    Ok(b)
}

fn env_bounds() -> Result<EnvBounds> {
    match std::env::var(BOUNDS_VAR) {
        Ok(s) => parse_env_bounds(&s),
        Err(_) => Ok(EnvBounds::default()),
    }
}

fn search_budget(env: &EnvBounds, max_degree: Option<u32>, max_work: Option<u64>) -> SearchBudget {
    let mut b = SearchBudget::default();
    if let Some(d) = max_degree.or(env.monodromy_degree) {
        b.max_degree = d;
    }
    if let Some(w) = max_work.or(env.monodromy_work) {
        b.max_work = w;
    }
    b
}

fn strata_bounds(env: &EnvBounds, a: &StrataArgs) -> StrataBounds {
    let mut b = StrataBounds {
        search: search_budget(env, None, None),
        ..StrataBounds::default()
    };
    if let Some(g) = a.max_genus.or(env.strata_genus) {
        b.max_genus = g;
    }
    if let Some(d) = a.max_degree.or(env.strata_degree) {
        b.max_degree = d;
    }
    if let Some(c) = a.max_candidates.or(env.strata_candidates) {
        b.max_candidates = c;
    }
    b
}

fn read_cover(path: &PathBuf) -> Result<GraphCover> {
    GraphCover::from_json(&std::fs::read_to_string(path)?)
}

fn emit_contributions(out: &mut dyn Write, list: &[strata::StratumContribution], only: bool) -> Result<()> {
    let shown: Vec<strata::StratumContribution> = if only {
        strata::candidates(list).into_iter().cloned().collect()
    } else {
        list.to_vec()
    };
    writeln!(out, "{}", strata::contributions_to_json(&shown))?;
    Ok(())
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    if let Some(n) = cli.threads {
        // the global pool can only be configured once per process
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            let _ = writeln!(err, "note: worker pool already running, --threads ignored");
        }
    }
    let result = execute(cli.command, out, err);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_refusal() {
                1
            } else {
                2
            }
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let env = env_bounds()?;
    match command {
        Command::Tau { d } => writeln!(out, "{}", modular::tau(d)?)?,
        Command::Ad { d } => writeln!(out, "{}", modular::a_coeff(d)?)?,
        Command::ScanTau { max } | Command::ScanAd { max } => {
            let table = if matches!(command, Command::ScanTau { .. }) {
                ScanTable::Tau
            } else {
                ScanTable::ACoeff
            };
            let zeros = modular::scan_nonvanishing(table, max)?;
            for z in &zeros {
                writeln!(out, "{z}")?;
            }
            writeln!(err, "{} zero(s) up to {max}", zeros.len())?;
        }
        Command::HeckeCheck { k, prec } => {
            let (ok, compared) = modular::hecke_eigen_check(k, prec)?;
            if ok {
                writeln!(out, "T_{k} eta^24 = tau({k}) eta^24 on {compared} coefficients")?;
            } else {
                writeln!(out, "T_{k} eta^24 differs from tau({k}) eta^24")?;
                return Ok(1);
            }
        }
        Command::Sublattices { k } => {
            for m in lattice::sublattices(k)? {
                writeln!(out, "{m}")?;
            }
        }
        Command::IsogenyComponents { k } => {
            for c in lattice::double_cosets(k)? {
                writeln!(out, "{c}")?;
            }
        }
        Command::Hurwitz(a) => {
            let budget = search_budget(&env, a.max_degree, a.max_work);
            let profiles = MonodromyProblem::parse_profiles(&a.profiles)?;
            let problem = MonodromyProblem::new(a.degree, a.target_genus, profiles, a.connected)?;
            let count = hurwitz::count_tuples_with(&problem, &budget)?;
            let w = count.weighted();
            writeln!(out, "weighted: {}/{}", w.numer(), w.denom())?;
            writeln!(out, "classes: {}", count.classes)?;
            if let Some(d) = &count.diagnostic {
                writeln!(err, "note: {d}")?;
            }
        }
        Command::ValidateCover { file } => {
            let c = read_cover(&file)?;
            match c.validate() {
                Ok(()) => writeln!(out, "valid")?,
                Err(v) => {
                    writeln!(out, "invalid: {v}")?;
                    return Ok(1);
                }
            }
        }
        Command::CoverDim { file } => {
            let c = read_cover(&file)?;
            c.validate()
                .map_err(|v| Error::invalid(format!("cover is invalid: {v}")))?;
            writeln!(out, "{}", covers::stratum_dimension(&c, &[])?)?;
        }
        Command::CoverMult { file, a_edges } => {
            let c = read_cover(&file)?;
            c.validate()
                .map_err(|v| Error::invalid(format!("cover is invalid: {v}")))?;
            if let Some(&e) = a_edges.iter().find(|&&e| e >= c.source.num_edges()) {
                return Err(Error::invalid(format!("source edge {e} does not exist")));
            }
            let mut keep = vec![false; c.source.num_edges()];
            for &e in &a_edges {
                keep[e] = true;
            }
            let contraction = c.source.contract(&keep);
            let identity = c.source.all_legs().into_iter().map(|l| (l, l)).collect();
            let a = AStructure::find(&c.source, &contraction.graph, &a_edges, &identity)
                .ok_or_else(|| Error::invalid("selected edges do not define an A-structure"))?;
            writeln!(out, "{}", covers::intersection_multiplicity(&c, &a)?)?;
        }
        Command::ClassifyEqual12 { g, m2, d, bounds } => {
            let b = strata_bounds(&env, &bounds);
            let list = strata::classify_equal12_with(g, m2, d, &b)?;
            emit_contributions(out, &list, bounds.candidates_only)?;
        }
        Command::ClassifyDivisor { shape, params, bounds } => {
            let b = strata_bounds(&env, &bounds);
            let list = strata::classify_divisor_pullback_with(&params.params()?, shape, &b)?;
            emit_contributions(out, &list, bounds.candidates_only)?;
        }
        Command::ClassifyComb { params, s, bounds } => {
            let b = strata_bounds(&env, &bounds);
            let list = strata::classify_comb_pullback_with(&params.params()?, s, &b)?;
            emit_contributions(out, &list, bounds.candidates_only)?;
        }
        Command::Certify { params, emit } => {
            let p = HurwitzParams {
                g: params.g,
                h: params.h,
                d: params.d,
                m2: params.m2,
                md: params.md,
                n: params.n,
            };
            let cert = certify::build_certificate(&p)?;
            match emit {
                Some(path) => {
                    std::fs::write(&path, cert.to_json() + "\n")?;
                    writeln!(out, "certificate with {} step(s) written to {}", cert.steps.len(), path.display())?;
                }
                None => writeln!(out, "{}", cert.to_json())?,
            }
        }
        Command::Verify { file } => {
            let cert = Certificate::from_json(&std::fs::read_to_string(&file)?)?;
            match certify::verify_certificate_report(&cert) {
                Ok(()) => writeln!(out, "valid")?,
                Err(why) => {
                    writeln!(out, "invalid: {why}")?;
                    return Ok(1);
                }
            }
        }
    }
    Ok(0)
}
