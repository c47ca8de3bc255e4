//! The `gil` command line: argument parsing, dispatch and exit codes.
//!
//! [`run`] does all the work and returns what the binary should print, so
//! the tests can drive it without spawning processes.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use gil_core::inertia::VCase;
use gil_core::witness::ScanKind;

mod commands;
mod report;

pub use report::Format;

/// Environment variable overriding the closure budget of `dickson classify`.
pub const MAX_CLOSURE_VAR: &str = "GIL_MAX_CLOSURE";

#[derive(Parser, Debug)]
#[command(name = "gil", version, about = "Exact reports on mod-p Galois image bounds")]
pub struct Cli {
    /// Output format; csv is only available for scan.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report to FILE instead of standard output.
    #[arg(long, value_name = "FILE", global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Irregular primes up to a bound, with their indices.
    Irregular {
        #[arg(long)]
        max: u64,
    },
    /// Class group of Q(sqrt(-p)) for a prime p = 3 (mod 4).
    Classgroup {
        #[arg(short)]
        p: u64,
    },
    /// Theta series coefficients of a class-group character.
    Theta {
        #[arg(short)]
        p: u64,
        #[arg(long, default_value_t = 100)]
        coeffs: u64,
        /// Index into the characters, 0 being the trivial one.
        #[arg(long = "char", default_value_t = 1)]
        index: usize,
    },
    /// Subgroups of PGL_2(F_q).
    Dickson {
        #[command(subcommand)]
        command: DicksonCommand,
    },
    /// Inertia at p and the exceptional case.
    Inertia {
        #[command(subcommand)]
        command: InertiaCommand,
    },
    /// Explicit prime bounds.
    Bounds {
        #[command(subcommand)]
        command: BoundsCommand,
    },
    /// Genus and newform dimensions.
    Dims(DimsArgs),
    /// Per-prime witness reports.
    Witness {
        #[arg(value_enum)]
        kind: WitnessKind,
        #[arg(short)]
        p: u64,
    },
    /// Run a per-prime operation over a range of primes.
    Scan {
        /// borel, lr, hida, eta or brauer_siegel
        #[arg(value_parser = parse_scan_kind)]
        kind: ScanKind,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Worker threads; never changes the output.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum DicksonCommand {
    /// Dickson type of the image in PGL_2 of the group generated by `--gen`.
    Classify {
        /// `p` or `p,r` for F_{p^r}, r in {1, 2}.
        #[arg(long)]
        field: String,
        /// Matrix entries "a,b,c,d"; over F_{p^2} an entry may be `x+yt`.
        #[arg(long = "gen", required = true, allow_hyphen_values = true)]
        gens: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum InertiaCommand {
    /// Local verdict for a weight-2 newform of level p with Nebentypus omega^j.
    Local {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        j: u64,
        #[arg(long, value_parser = parse_vcase)]
        vcase: VCase,
    },
    /// gcd(j, p - 1) <= 3 on the supersingular branch, for all p <= max.
    Eta {
        #[arg(long)]
        max: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum BoundsCommand {
    /// Bounds for the exceptional case in dimension d.
    Exceptional {
        #[arg(short)]
        d: u32,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct DimsArgs {
    /// Genus of X_0(N).
    #[arg(long)]
    pub x0: Option<u64>,
    /// Genus of X_1(N).
    #[arg(long)]
    pub x1: Option<u64>,
    /// Dimension of the weight-2 newforms on Gamma_0(N).
    #[arg(long)]
    pub new: Option<u64>,
    /// Dimension of J_1(p).
    #[arg(long)]
    pub j1: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum WitnessKind {
    Borel,
    Lr,
    Hida,
}

fn parse_scan_kind(s: &str) -> Result<ScanKind, String> {
    s.parse()
}

fn parse_vcase(s: &str) -> Result<VCase, String> {
    s.parse().map_err(|e: gil_core::inertia::InertiaError| e.to_string())
}

/// Why a command did not produce a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Bad arguments or a violated precondition.
    Usage(String),
    /// An expected negative answer, such as a regular prime.
    Domain { tag: &'static str, message: String },
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Domain { .. } => 2,
            Failure::Usage(_) | Failure::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("error: {m}"),
            Failure::Domain { tag, message } => format!("error[{tag}]: {message}"),
            Failure::Io(m) => format!("error: {m}"),
        }
    }
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name), runs the command and renders
/// the report. Exit code 0 on success, 2 on domain errors, 1 otherwise.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(f) => Outcome {
            code: f.exit_code(),
            stdout: String::new(),
            stderr: f.message() + "\n",
        },
    }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let report = commands::dispatch(&cli.command)?;
    let rendered = report.render(cli.format)?;
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &rendered)
                .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(rendered),
    }
}
