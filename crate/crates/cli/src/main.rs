mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clvof_core::Method;

/// Geometric VOF contact-line verification harness.
#[derive(Parser, Debug)]
#[command(name = "clvof", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a single case and write its artifacts.
    Run(RunArgs),
    /// Run a case at several mesh sizes and fit convergence orders.
    Sweep(SweepArgs),
    /// Repeat a mesh sweep for several Courant numbers.
    CflStudy(CflArgs),
    /// Reconstruction translation test plus a seeded exact-line check.
    TranslateTest(TranslateArgs),
    /// Vortex-in-a-box mesh sweep with the L1 shape error.
    VortexTest(VortexArgs),
}

/// Options shared by the simulation subcommands.
#[derive(Args, Debug, Clone)]
pub struct CaseArgs {
    /// Case file; the built-in linear-field case is used when omitted.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Reconstruction method.
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,
    /// Cells along x1 (multiple of 4).
    #[arg(long)]
    pub n: Option<usize>,
    /// Courant number.
    #[arg(long)]
    pub cfl: Option<f64>,
    /// Exit with status 3 when the run misses its regression thresholds.
    #[arg(long)]
    pub check: bool,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub case: CaseArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    /// Mesh sizes; `--n` adds a single extra size.
    #[arg(long, value_delimiter = ',', default_values_t = [128, 256, 512])]
    pub ns: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct CflArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [128, 256, 512])]
    pub ns: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.3, 0.5, 0.7, 0.9])]
    pub cfls: Vec<f64>,
}

#[derive(Args, Debug)]
pub struct TranslateArgs {
    /// Polar angle of the outward interface normal, in degrees.
    #[arg(long, default_value_t = 60.0, allow_hyphen_values = true)]
    pub angle: f64,
    /// Number of line positions across the cell.
    #[arg(long, default_value_t = 200)]
    pub offsets: usize,
    /// Number of random lines in the exact-line check.
    #[arg(long, default_value_t = 1000)]
    pub lines: usize,
    /// Seed of the random-line generator.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "DIR", default_value = "out/translate")]
    pub out: PathBuf,
    #[arg(long)]
    pub check: bool,
}

#[derive(Args, Debug)]
pub struct VortexArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [128, 256, 512])]
    pub ns: Vec<usize>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Config = 1,
    Numerical = 2,
    Regression = 3,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let status = match commands::dispatch(cli.command) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("clvof: {e}");
            e.status()
        }
    };
    ExitCode::from(status as u8)
}
