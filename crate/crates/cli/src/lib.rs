//! Command-line driver: argument parsing, configuration and report emission.

pub mod commands;
pub mod config;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::config::Config;
use crate::report::RunReport;

pub const THREADS_ENV: &str = "CONDENSED_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "condensed-lab",
    version,
    about = "Exact computations in integer homological algebra"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Emit the report as a single JSON line.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print nothing; the exit code carries the verdict.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// TOML file with default caps.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Record wall time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smith normal form of an integer matrix given as JSON rows.
    Snf {
        #[arg(long)]
        matrix: String,
    },
    /// Homology of a chain complex read from a JSON file.
    Homology {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        degree: Option<i64>,
    },
    /// Homology of the iterated bar construction B^n P.
    EmHomology {
        /// `Z/2`, `Z/2+Z/4`, `Z` or `Z^2`.
        #[arg(long)]
        group: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: usize,
        /// Entry window for lattices.
        #[arg(long)]
        window: Option<u32>,
    },
    /// Exactness of the Breen-Deligne prefix for a finite group.
    BdCheck {
        /// Cyclic orders, e.g. `2,2`.
        #[arg(long)]
        orders: String,
    },
    /// Homotopy between multiplication by n and the bracket [n].
    BdHomotopy {
        #[arg(long)]
        orders: String,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Noebeling basis of a subset of the cube read from JSON.
    Noebeling {
        #[arg(long)]
        points: PathBuf,
    },
    /// Cech cohomology of the torus model and split hypercovers.
    #[command(subcommand)]
    Cech(CechCommand),
    /// Normal forms and identity checks for solid expressions.
    #[command(subcommand)]
    Solid(SolidCommand),
    /// Dualizing complexes, shriek units and Serre duality.
    #[command(subcommand)]
    Duality(DualityCommand),
    /// Rational covers of the adic spectrum.
    #[command(subcommand)]
    Adic(AdicCommand),
    /// Run the full battery of checks.
    Suite {
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CechCommand {
    /// Cohomology of the finite torus model.
    Torus {
        #[arg(long)]
        factors: usize,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Norm bound for the contracting homotopy of a split hypercover.
    Homotopy {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum SolidCommand {
    /// Normal form of a solid expression.
    Normalize { expr: String },
    /// Compare two expressions symbolically and at a truncation level.
    Check {
        lhs: String,
        rhs: String,
        #[arg(long)]
        level: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum DualityCommand {
    /// f^! of the unit for a polynomial ring or a quotient.
    ShriekUnit {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        codimension: Option<usize>,
    },
    /// Serre duality pairing on the projective line.
    P1 {
        #[arg(long, allow_negative_numbers = true)]
        twist: i64,
    },
    /// Dualizing complex of the coordinate cross.
    Xy {
        #[arg(long)]
        window: Option<usize>,
    },
    /// Presentation, idempotence and vanishing checks for A_∞.
    Ainfty {
        #[arg(long)]
        window: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum AdicCommand {
    /// Standard refinement of a rational cover read from JSON.
    Refine {
        #[arg(long)]
        cover: PathBuf,
    },
}

/// Everything a process would print, and its exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Invocation {
    fn usage(message: String) -> Self {
        Invocation {
            stdout: String::new(),
            stderr: message,
            code: 2,
        }
    }
}

/// Worker count from the environment, if set to a positive integer.
pub fn configured_threads() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Invocation {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Invocation::usage(text)
            };
        }
    };
    let config = match &cli.global.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => return Invocation::usage(format!("error: {e}\n")),
        },
        None => Config::default(),
    };
    let start = Instant::now();
    let result = match configured_threads() {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::execute(&cli.command, &config)),
            Err(e) => return Invocation::usage(format!("error: cannot start {n} workers: {e}\n")),
        },
        None => commands::execute(&cli.command, &config),
    };
    let mut report: RunReport = match result {
        Ok(r) => r,
        Err(commands::CliError::Usage(m)) => return Invocation::usage(format!("error: {m}\n")),
    };
    if cli.global.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis());
    }
    let stdout = if cli.global.quiet {
        String::new()
    } else if cli.global.json {
        report.to_json() + "\n"
    } else {
        report.render()
    };
    Invocation {
        stdout,
        stderr: String::new(),
        code: report.outcome.exit_code(),
    }
}
