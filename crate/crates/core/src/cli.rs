//! Command-line front end. Couplings are angular frequencies in radians per
//! unit time; times are in the reciprocal unit.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 usage error.

use crate::dynamics::{population_series, TransferSolution};
use crate::error::Error;
use crate::hamiltonian::{build_hamiltonian, CouplingSet};
use crate::hopf::{hopf_map, DEFAULT_TOL};
use crate::optimizer::{design_search, DesignProblem, DesignResult};
use crate::oracle::oracle_propagate;
use crate::triples::{
    couplings_from_pair, detect_transfer_condition, enumerate_primitive, euclid_triple, pair_from_triple, OddPair,
    PythTriple,
};
use crate::StateAmplitudes;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: &str = "t,p1,p2,p3,p4,re_a1,im_a1,re_a2,im_a2,re_a3,im_a3,re_a4,im_a4";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fourlevel",
    version,
    about = "Complete population transfer in four-mode nearest-neighbor systems",
    long_about = "Complete population transfer in four-mode nearest-neighbor systems.\n\n\
                  Couplings are angular frequencies in radians per unit time; times are in the \
                  reciprocal unit. Only coupling ratios and one overall scale matter."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Populations and amplitudes from |1> on a uniform time grid
    Simulate(SimulateArgs),
    /// Ladder couplings for complete 1->3 transfer at a given time
    Design(DesignArgs),
    /// Check whether couplings satisfy the Pythagorean transfer condition
    Detect(DetectArgs),
    /// List primitive Pythagorean triples, one `a b c` per line
    Triples(TriplesArgs),
    /// Search coupling space for complete transfer at a target time
    Optimize(OptimizeArgs),
}

#[derive(Debug, Args)]
pub struct CouplingArgs {
    /// Coupling between modes 1 and 2 (rad per unit time)
    #[arg(long, allow_negative_numbers = true)]
    pub v12: f64,
    /// Coupling between modes 2 and 3 (rad per unit time)
    #[arg(long, allow_negative_numbers = true)]
    pub v23: f64,
    /// Coupling between modes 3 and 4 (rad per unit time)
    #[arg(long, allow_negative_numbers = true)]
    pub v34: f64,
    /// Coupling closing the loop between modes 1 and 4 (rad per unit time)
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub v14: f64,
}

impl CouplingArgs {
    fn couplings(&self) -> Result<CouplingSet, Error> {
        CouplingSet::new(self.v12, self.v23, self.v34, self.v14)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub couplings: CouplingArgs,
    /// End of the time grid, starting at 0
    #[arg(long)]
    pub t_max: f64,
    /// Number of intervals; the grid has steps + 1 points
    #[arg(long, default_value_t = 2000)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("generator").required(true).args(["p", "triple"]))]
pub struct DesignArgs {
    #[arg(long, requires = "q")]
    pub p: Option<u64>,
    #[arg(long, requires = "p")]
    pub q: Option<u64>,
    /// Primitive triple `a,b,c` in any leg order
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["p", "q"])]
    pub triple: Option<Vec<u64>>,
    /// Transfer time in reciprocal coupling units
    #[arg(long)]
    pub tau: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub couplings: CouplingArgs,
    /// Relative tolerance on the ladder condition and frequency ratio
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TriplesArgs {
    /// Largest hypotenuse to list
    #[arg(long)]
    pub c_max: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Target transfer time in reciprocal coupling units
    #[arg(long)]
    pub tau: f64,
    /// Interval `lo,hi` applied to every coupling
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub bounds: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Search all four couplings instead of the ladder (v14 = 0)
    #[arg(long)]
    pub diamond: bool,
    #[arg(long, default_value_t = crate::optimizer::DEFAULT_STARTS)]
    pub starts: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Why a command failed; decides the exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
struct TripleJson {
    a: u64,
    b: u64,
    c: u64,
}

impl From<PythTriple> for TripleJson {
    fn from(t: PythTriple) -> Self {
        TripleJson { a: t.a, b: t.b, c: t.c }
    }
}

#[derive(Serialize)]
struct PairJson {
    p: u64,
    q: u64,
}

#[derive(Serialize)]
struct DesignJson {
    schema: u32,
    couplings: CouplingSet,
    triple: TripleJson,
    pair: PairJson,
    tau: f64,
    omega: f64,
    v_l: f64,
    v_r: f64,
    /// `|a3(tau)|²` from the brute-force propagator.
    fidelity: f64,
}

#[derive(Serialize)]
struct MatchJson {
    triple: TripleJson,
    pair: PairJson,
    tau: f64,
}

#[derive(Serialize)]
struct DetectJson {
    schema: u32,
    xi: [f64; 4],
    #[serde(rename = "match")]
    matched: Option<MatchJson>,
}

#[derive(Serialize)]
struct OptimizeJson<'a> {
    schema: u32,
    tau_target: f64,
    #[serde(flatten)]
    result: &'a DesignResult,
    /// `1 - |a3(tau)|²` recomputed by the brute-force propagator.
    oracle_infidelity: f64,
}

#[derive(Serialize)]
struct SimulateJson {
    schema: u32,
    couplings: CouplingSet,
    disconnected: bool,
    t: Vec<f64>,
    populations: Vec<[f64; 4]>,
    /// `[re_a1, im_a1, ..., re_a4, im_a4]` per time point.
    amplitudes: Vec<[f64; 8]>,
}

fn oracle_fidelity(c: &CouplingSet, tau: f64) -> Result<f64, Error> {
    let out = oracle_propagate(&build_hamiltonian(c)?, &StateAmplitudes::basis(1), tau)?;
    Ok(out.a3.norm_sqr())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn simulate(args: &SimulateArgs) -> Result<String, Failure> {
    let c = args.couplings.couplings()?;
    let series = population_series(&c, args.t_max, args.steps)?;
    Ok(match args.format {
        Format::Csv => {
            let mut s = String::with_capacity(series.times.len() * 256);
            s.push_str(CSV_HEADER);
            s.push('\n');
            for (t, a) in series.times.iter().zip(&series.amplitudes) {
                let pops = a.populations();
                let mut fields = vec![fmt_f64(*t)];
                fields.extend(pops.iter().map(|p| fmt_f64(*p)));
                for z in a.as_array() {
                    fields.push(fmt_f64(z.re));
                    fields.push(fmt_f64(z.im));
                }
                let _ = writeln!(s, "{}", fields.join(","));
            }
            s
        }
        Format::Json => to_json(&SimulateJson {
            schema: SCHEMA_VERSION,
            couplings: c,
            disconnected: series.disconnected,
            t: series.times.clone(),
            populations: series.amplitudes.iter().map(|a| a.populations()).collect(),
            amplitudes: series
                .amplitudes
                .iter()
                .map(|a| {
                    let z = a.as_array();
                    [z[0].re, z[0].im, z[1].re, z[1].im, z[2].re, z[2].im, z[3].re, z[3].im]
                })
                .collect(),
        }),
    })
}

fn design(args: &DesignArgs) -> Result<String, Failure> {
    let pair = match (&args.triple, args.p, args.q) {
        (Some(t), _, _) if t.len() != 3 => {
            return Err(Failure::Usage(format!("--triple takes a,b,c, got {} values", t.len())))
        }
        (Some(t), _, _) => pair_from_triple(&PythTriple {
            a: t[0],
            b: t[1],
            c: t[2],
        })?,
        (None, Some(p), Some(q)) => OddPair::new(p, q)?,
        _ => return Err(Failure::Usage("either --p and --q or --triple is required".into())),
    };
    let (couplings, sol): (CouplingSet, TransferSolution) = couplings_from_pair(&pair, args.tau)?;
    let fidelity = oracle_fidelity(&couplings, sol.tau)?;
    Ok(to_json(&DesignJson {
        schema: SCHEMA_VERSION,
        couplings,
        triple: euclid_triple(&pair).into(),
        pair: PairJson { p: pair.p, q: pair.q },
        tau: sol.tau,
        omega: sol.omega,
        v_l: sol.v_l,
        v_r: sol.v_r,
        fidelity,
    }))
}

fn detect(args: &DetectArgs) -> Result<String, Failure> {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Failure::Usage(format!("--tol must be positive, got {}", args.tol)));
    }
    let c = args.couplings.couplings()?;
    let x = hopf_map(&c)?;
    let matched = detect_transfer_condition(&c, args.tol)?.map(|m| MatchJson {
        triple: m.triple.into(),
        pair: PairJson {
            p: m.pair.p,
            q: m.pair.q,
        },
        tau: m.solution.tau,
    });
    Ok(to_json(&DetectJson {
        schema: SCHEMA_VERSION,
        xi: x.as_array(),
        matched,
    }))
}

fn triples(args: &TriplesArgs) -> Result<String, Failure> {
    let mut s = String::new();
    for t in enumerate_primitive(args.c_max) {
        let _ = writeln!(s, "{} {} {}", t.a, t.b, t.c);
    }
    Ok(s)
}

fn optimize(args: &OptimizeArgs) -> Result<String, Failure> {
    let [lo, hi] = args.bounds[..] else {
        return Err(Failure::Usage(format!(
            "--bounds takes lo,hi, got {} values",
            args.bounds.len()
        )));
    };
    let mut prob = if args.diamond {
        DesignProblem::diamond(args.tau, lo, hi, args.seed)
    } else {
        DesignProblem::ladder(args.tau, lo, hi, args.seed)
    };
    prob.starts = args.starts;
    let result = design_search(&prob)?;
    let oracle_infidelity = 1.0 - oracle_fidelity(&result.couplings, args.tau)?;
    Ok(to_json(&OptimizeJson {
        schema: SCHEMA_VERSION,
        tau_target: args.tau,
        result: &result,
        oracle_infidelity,
    }))
}

fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
                EXIT_OK
            };
        }
    };
    let (result, out) = match &cli.command {
        Command::Simulate(a) => (simulate(a), a.out.as_ref()),
        Command::Design(a) => (design(a), a.out.as_ref()),
        Command::Detect(a) => (detect(a), a.out.as_ref()),
        Command::Triples(a) => (triples(a), a.out.as_ref()),
        Command::Optimize(a) => (optimize(a), a.out.as_ref()),
    };
    match result.and_then(|text| emit(&text, out, stdout)) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numerical(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_NUMERICAL
        }
    }
}
