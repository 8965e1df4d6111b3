mod commands;
mod complex;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mayer_core::spectral::DetKind;
use mayer_core::ComplexPoint;

use crate::commands::Failure;
use crate::complex::parse_complex;

#[derive(Parser, Debug)]
#[command(
    name = "mayer-zeta",
    version,
    about = "Traces, Fredholm determinants and Selberg zeta values of the Gauss-map transfer operator"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the table to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// `oracle` evaluates the closed-form trace in double-double arithmetic.
    #[arg(long, value_enum, default_value_t = Precision::Standard, global = true)]
    precision: Precision,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    Standard,
    Oracle,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// tr L_s^n by several independent routes, with pairwise differences.
    Trace(TraceArgs),
    /// Z(s) = det(1 - L_s^2), det(1 - L_s) and det(1 + L_s) along a segment.
    DetGrid(DetGridArgs),
    /// Zeros of a finite determinant by secant iteration.
    FindZeros(FindZerosArgs),
    /// Hyperbolic conjugacy classes up to a norm cap, as CSV.
    Census(CensusArgs),
    /// Run the invariant suite; exit status 1 if any check fails.
    Verify(VerifyArgs),
}

/// A single point (`--s`) or `count` equally spaced points from `from` to `to`.
#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, value_parser = parse_complex, conflicts_with_all = ["from", "to"])]
    s: Option<ComplexPoint>,
    #[arg(long, value_parser = parse_complex, requires = "to")]
    from: Option<ComplexPoint>,
    #[arg(long, value_parser = parse_complex, requires = "from")]
    to: Option<ComplexPoint>,
    #[arg(long, default_value_t = 1)]
    count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TraceMethodArg {
    Closed,
    Matrix,
    Kernel,
    Orbit,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(
        long = "methods",
        alias = "method",
        value_enum,
        value_delimiter = ',',
        default_value = "closed,matrix,kernel"
    )]
    methods: Vec<TraceMethodArg>,
    /// Power n in tr L_s^n (closed and kernel routes need n = 1).
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Sum orbits over the digit cube {1..max_digit}^n with a certified tail
    /// bound; without it, large digits are summed analytically.
    #[arg(long)]
    max_digit: Option<u32>,
    /// Matrix truncation order M.
    #[arg(long, default_value_t = 64)]
    order: usize,
    /// Branches summed directly by the closed-form route.
    #[arg(long, default_value_t = 1000)]
    n_cap: u64,
}

#[derive(Args, Debug)]
struct DetGridArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 64)]
    order: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WhichDet {
    Minus,
    Plus,
    MinusSquare,
}

impl From<WhichDet> for DetKind {
    fn from(w: WhichDet) -> DetKind {
        match w {
            WhichDet::Minus => DetKind::Minus,
            WhichDet::Plus => DetKind::Plus,
            WhichDet::MinusSquare => DetKind::MinusSquare,
        }
    }
}

#[derive(Args, Debug)]
struct FindZerosArgs {
    /// Starting points; repeat the flag for several searches.
    #[arg(long, value_parser = parse_complex, required = true)]
    start: Vec<ComplexPoint>,
    #[arg(long, value_enum, default_value_t = WhichDet::MinusSquare)]
    which: WhichDet,
    #[arg(long, default_value_t = 64)]
    order: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[arg(long)]
    norm_cap: f64,
    /// Longest word enumerated.
    #[arg(long, default_value_t = 24)]
    length_cap: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Smaller truncations, tolerances relaxed tenfold.
    #[arg(long)]
    fast: bool,
    /// Flip the sign of the matrix entry a_00 (negative control).
    #[arg(long)]
    inject_sign_fault: bool,
    /// Only run checks whose name contains this text.
    #[arg(long)]
    only: Option<String>,
}

/// Validated command line.
#[derive(Debug)]
pub struct RunConfig {
    pub format: Format,
    pub output: Option<PathBuf>,
    pub precision: Precision,
    pub command: RunCommand,
}

#[derive(Debug)]
pub enum RunCommand {
    Trace {
        grid: Vec<ComplexPoint>,
        methods: Vec<TraceMethodArg>,
        n: usize,
        max_digit: Option<u32>,
        order: usize,
        n_cap: u64,
    },
    DetGrid {
        grid: Vec<ComplexPoint>,
        order: usize,
    },
    FindZeros {
        starts: Vec<ComplexPoint>,
        kind: DetKind,
        order: usize,
        tol: f64,
    },
    Census {
        norm_cap: f64,
        length_cap: usize,
    },
    Verify {
        fast: bool,
        inject_sign_fault: bool,
        only: Option<String>,
    },
}

fn grid(g: &GridArgs) -> Result<Vec<ComplexPoint>, String> {
    if g.count == 0 {
        return Err("grid count must be at least 1".into());
    }
    let (a, b) = match (g.s, g.from, g.to) {
        (Some(s), _, _) => (s, s),
        (None, Some(a), Some(b)) => (a, b),
        _ => return Err("give either --s or both --from and --to".into()),
    };
    if g.s.is_some() && g.count != 1 {
        return Err("--count needs --from and --to".into());
    }
    let n = g.count;
    Ok((0..n).map(|k| if n == 1 { a } else { a + (b - a) * (k as f64 / (n - 1) as f64) }).collect())
}

fn check_order(order: usize) -> Result<(), String> {
    if order < 2 {
        return Err(format!("truncation order must be at least 2, got {order}"));
    }
    Ok(())
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Result<RunConfig, String> {
        let command = match cli.command {
            Command::Trace(a) => {
                check_order(a.order)?;
                if a.n == 0 {
                    return Err("--n must be at least 1".into());
                }
                if a.max_digit == Some(0) {
                    return Err("--max-digit must be positive".into());
                }
                let mut methods = a.methods.clone();
                methods.dedup();
                RunCommand::Trace {
                    grid: grid(&a.grid)?,
                    methods,
                    n: a.n,
                    max_digit: a.max_digit,
                    order: a.order,
                    n_cap: a.n_cap,
                }
            }
            Command::DetGrid(a) => {
                check_order(a.order)?;
                RunCommand::DetGrid { grid: grid(&a.grid)?, order: a.order }
            }
            Command::FindZeros(a) => {
                check_order(a.order)?;
                if a.tol.is_nan() || a.tol <= 0.0 {
                    return Err("--tol must be positive".into());
                }
                if let Some(bad) = a.start.iter().find(|s| s.re < 0.5) {
                    return Err(format!("start must satisfy Re(s) >= 1/2, got {bad}"));
                }
                RunCommand::FindZeros { starts: a.start, kind: a.which.into(), order: a.order, tol: a.tol }
            }
            Command::Census(a) => {
                if a.norm_cap.is_nan() || a.norm_cap <= 0.0 || a.length_cap == 0 {
                    return Err("census caps must be positive".into());
                }
                RunCommand::Census { norm_cap: a.norm_cap, length_cap: a.length_cap }
            }
            Command::Verify(a) => {
                RunCommand::Verify { fast: a.fast, inject_sign_fault: a.inject_sign_fault, only: a.only }
            }
        };
        Ok(RunConfig { format: cli.format, output: cli.output, precision: cli.precision, command })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    mayer_core::parallel::init_thread_pool();
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match commands::run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Core(e)) => {
            eprintln!("error: {}: {e}", e.kind());
            ExitCode::from(if e.is_config() || matches!(e, mayer_core::Error::Pole(_)) { 2 } else { 3 })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
