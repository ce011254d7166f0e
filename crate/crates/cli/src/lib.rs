//! Argument handling and subcommands for the `exactform` binary.
//!
//! [`run`] takes the argument list and two writers so tests can drive the
//! whole program in-process. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success (exact / verified solve / all fuzz trials passed) |
//! | 1 | usage or parse error |
//! | 2 | form is not exact |
//! | 3 | not integrable in the supported class, or verification failed |
//! | 4 | at least one fuzz trial failed |

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_EXACT: i32 = 2;
pub const EXIT_UNSOLVED: i32 = 3;
pub const EXIT_FUZZ_FAILURE: i32 = 4;

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "exactform", version, about = "Solve exact differential equations M_1 dx_1 + ... + M_n dx_n = 0")]
struct Cli {
    /// Print a JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the form for exactness
    Check(CheckArgs),
    /// Find a potential for an exact form
    Solve(SolveArgs),
    /// Round-trip random potentials through both solvers
    Fuzz(FuzzArgs),
    /// Compare operation counts of the two methods
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// The form, e.g. "y dx + x dy = 0"
    form: Option<String>,
    /// Read the form from a file
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SamplingArgs {
    /// Sample points for numeric fallbacks in the exactness check
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Relative tolerance for numeric fallbacks in the exactness check
    #[arg(long, default_value_t = 1e-9, value_parser = positive_f64)]
    tolerance: f64,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    sampling: SamplingArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Basic,
    Standard,
    Both,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Basic)]
    method: MethodArg,
    #[command(flatten)]
    sampling: SamplingArgs,
}

#[derive(Debug, Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Variable count range, MIN..MAX within 2..6
    #[arg(long, default_value = "2..5")]
    vars: VarRange,
    /// Largest number of terms in a generated potential (1..8)
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=8))]
    max_terms: u64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Variable count range, MIN..MAX within 2..6
    #[arg(long, default_value = "2..5")]
    vars: VarRange,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Fuzzed instances per variable count
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    instances: u64,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=8))]
    max_terms: u64,
}

/// An inclusive range of variable counts written `MIN..MAX`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct VarRange {
    min: usize,
    max: usize,
}

impl FromStr for VarRange {
    type Err = String;

    fn from_str(s: &str) -> Result<VarRange, String> {
        let (lo, hi) = match s.split_once("..") {
            Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
            None => (s, s),
        };
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{s}` is not a range MIN..MAX"));
        let (min, max) = (parse(lo)?, parse(hi)?);
        if min < 2 || max > 6 || min > max {
            return Err(format!("variable range {min}..{max} must lie within 2..6"));
        }
        Ok(VarRange { min, max })
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Check(args) => commands::check(args, cli.json, out, err),
        Command::Solve(args) => commands::solve(args, cli.json, out, err),
        Command::Fuzz(args) => commands::fuzz(args, cli.json, out),
        Command::Bench(args) => commands::bench(args, cli.json, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
