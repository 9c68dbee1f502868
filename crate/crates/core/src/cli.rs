//! The `qslocc` command line: `classify`, `gen`, `verify` and `count`.
//!
//! [`run`] takes the argument list and output streams and returns the exit
//! code, so the binary is a one-line wrapper and the whole front end is
//! testable in-process.
//!
//! Exit codes: 0 success, 2 malformed input or any other error, 3 when a
//! tripartite state matches no catalog family (the report is still printed).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bipartite::classify_bipartite;
use crate::classifier::{classify_tripartite, count_classes, verify_equivalence, SloccVerdict};
use crate::error::{Error, Result};
use crate::harness::{orbit_sample, DEFAULT_CONDITION_BOUND};
use crate::numerics::TolerancePolicy;
use crate::pencil::SearchBudget;
use crate::states::{canonical_state, read_state, write_state, CanonicalId, ProductParams, PureState};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNCLASSIFIED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qslocc",
    version,
    about = "SLOCC classification of two- and three-qutrit pure states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Numerics {
    /// Relative rank threshold (default: $QSLOCC_TOL or 1e-9).
    #[arg(long)]
    tol: Option<f64>,
    /// Random lines used by the three-dimensional span search.
    #[arg(long, default_value_t = SearchBudget::default().lines)]
    budget: usize,
    /// Seed of the span search.
    #[arg(long, default_value_t = SearchBudget::default().seed)]
    seed: u64,
}

impl Numerics {
    fn policy(&self) -> Result<TolerancePolicy> {
        match self.tol {
            Some(t) => TolerancePolicy::with_rank_rel(t),
            None => TolerancePolicy::from_env(),
        }
    }

    fn budget(&self) -> SearchBudget {
        SearchBudget {
            lines: self.budget,
            seed: self.seed,
            ..SearchBudget::default()
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the state in a JSON state file.
    Classify {
        file: PathBuf,
        #[command(flatten)]
        numerics: Numerics,
        /// Print the JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Write a canonical state, or a random point of its orbit.
    Gen {
        /// FAMILY[:VARIANT] to write as is.
        #[arg(long, conflicts_with = "orbit", required_unless_present = "orbit")]
        canonical: Option<String>,
        /// FAMILY[:VARIANT] to move by a seeded random local operator.
        #[arg(long)]
        orbit: Option<String>,
        /// Seed of the random local operator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Condition-number bound of each local factor.
        #[arg(long, default_value_t = DEFAULT_CONDITION_BOUND)]
        cond: f64,
        /// Product-state parameters for P0P0P1, as JSON
        /// `{"phi":[[re,im],..],"varphi":..,"chi":..,"psi":..}` or `representative`.
        #[arg(long)]
        params: Option<String>,
        /// Re-classify the output and fail unless it lands in the requested family.
        #[arg(long)]
        verify: bool,
        /// Output file (default: standard output).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Decide whether two states are SLOCC equivalent.
    Verify {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        numerics: Numerics,
    },
    /// Number of SLOCC classes of three n-level systems.
    Count { n: u64 },
}

#[derive(Serialize)]
struct ToolInfo {
    name: &'static str,
    version: &'static str,
}

#[derive(Serialize)]
struct InputInfo {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum Outcome {
    Bipartite {
        schmidt_rank: usize,
        canonical: &'static str,
    },
    Tripartite(SloccVerdict),
}

/// Result of `classify`. The JSON form omits the elapsed time so that it
/// is byte-identical across runs.
#[derive(Serialize)]
struct Report {
    schema_version: u32,
    tool: ToolInfo,
    input: InputInfo,
    tolerances: TolerancePolicy,
    budget: SearchBudget,
    result: Outcome,
    #[serde(skip)]
    elapsed: Duration,
}

impl Report {
    fn text(&self) -> String {
        let mut s = match &self.result {
            Outcome::Bipartite { schmidt_rank, .. } => {
                let psi = ["\u{3a8}\u{2080}", "\u{3a8}\u{2081}", "\u{3a8}\u{2082}"][schmidt_rank - 1];
                format!("bipartite rank {schmidt_rank} ({psi})\n")
            }
            Outcome::Tripartite(v) => format!(
                "{v}\nsignature: {}\nrank triple: {:?}\nconfidence: {}\n",
                v.signature,
                v.rank_triple,
                serde_json::to_value(v.confidence)
                    .map(|j| j.as_str().unwrap_or("").to_string())
                    .unwrap_or_default()
            ),
        };
        s.push_str(&format!(
            "input: {} (sha256 {})\nrank threshold: {:e}\n{} {}, elapsed {:.3} ms\n",
            self.input.path,
            self.input.sha256,
            self.tolerances.rank_rel,
            self.tool.name,
            self.tool.version,
            self.elapsed.as_secs_f64() * 1e3
        ));
        s
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<PureState> {
    read_state(&read_file(path)?)
}

fn classify_file(path: &Path, numerics: &Numerics) -> Result<Report> {
    let start = Instant::now();
    let bytes = read_file(path)?;
    let tol = numerics.policy()?;
    let budget = numerics.budget();
    let state = read_state(&bytes)?;
    let result = if state.parties() == 2 {
        let c = classify_bipartite(&state, &tol)?;
        Outcome::Bipartite {
            schmidt_rank: c.schmidt_rank,
            canonical: c.canonical_name(),
        }
    } else {
        Outcome::Tripartite(classify_tripartite(&state, &tol, &budget)?)
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo {
            name: "qslocc",
            version: env!("CARGO_PKG_VERSION"),
        },
        input: InputInfo {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        },
        tolerances: tol,
        budget,
        result,
        elapsed: start.elapsed(),
    })
}

fn parse_params(s: &str) -> Result<ProductParams> {
    if s.trim().eq_ignore_ascii_case("representative") {
        return Ok(ProductParams::representative());
    }
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("--params: {e}")))
}

fn gen_state(
    canonical: Option<&str>,
    orbit: Option<&str>,
    seed: u64,
    cond: f64,
    params: Option<&str>,
) -> Result<(CanonicalId, PureState)> {
    let spec = canonical
        .or(orbit)
        .ok_or_else(|| Error::Parse("need --canonical or --orbit".into()))?;
    let mut id = CanonicalId::parse(spec)?;
    if let Some(p) = params {
        id = CanonicalId::with_params(id.family, id.variant, parse_params(p)?)?;
    }
    let state = canonical_state(&id)?;
    let state = if orbit.is_some() {
        orbit_sample(&state, seed, cond)?
    } else {
        state
    };
    Ok((id, state))
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Parse(format!("write failed: {e}"));
    match cli.command {
        Command::Classify { file, numerics, json } => {
            let report = classify_file(&file, &numerics)?;
            if json {
                let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Parse(e.to_string()))?;
                writeln!(out, "{text}").map_err(io)?;
            } else {
                write!(out, "{}", report.text()).map_err(io)?;
            }
            match &report.result {
                Outcome::Tripartite(v) if !v.is_classified() => Ok(EXIT_UNCLASSIFIED),
                _ => Ok(EXIT_OK),
            }
        }
        Command::Gen {
            canonical,
            orbit,
            seed,
            cond,
            params,
            verify,
            out: path,
        } => {
            let (id, state) = gen_state(canonical.as_deref(), orbit.as_deref(), seed, cond, params.as_deref())?;
            if verify {
                let v = classify_tripartite(&state, &TolerancePolicy::from_env()?, &SearchBudget::default())?;
                match v.label {
                    Some(l) if l.family == id.family => {
                        writeln!(err, "verified: {l}").map_err(io)?;
                    }
                    _ => {
                        writeln!(err, "generated state classifies as {v}, not {}", id.family).map_err(io)?;
                        return Ok(EXIT_UNCLASSIFIED);
                    }
                }
            }
            let bytes = write_state(&state);
            match path {
                Some(p) => std::fs::write(&p, bytes).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?,
                None => out.write_all(&bytes).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            first,
            second,
            numerics,
        } => {
            let (a, b) = (load(&first)?, load(&second)?);
            let e = verify_equivalence(&a, &b, &numerics.policy()?, &numerics.budget())?;
            writeln!(out, "{e}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Count { n } => {
            writeln!(out, "{}", count_classes(n)?.total).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_INPUT;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}
