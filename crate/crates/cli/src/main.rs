//! `cdc`: simulate coded shuffles and emit communication/computation trade-off data.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use cdc_core::lp::LpError;
use cdc_core::simulator::{SimError, VerificationFailure};
use cdc_core::{ClusterConfig, ConfigError, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "cdc", version, about = "Coded distributed computing simulator and trade-off solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run placement, map, shuffle and reduce bit-exactly and report the loads.
    Simulate(SimulateArgs),
    /// Emit the data behind a trade-off figure.
    Curve(CurveArgs),
    /// Solve the communication lower-bound LP at one budget.
    Bound(BudgetArgs),
    /// Solve the S-CDC LP at one budget and round it to an integer plan.
    ScdcPlan(BudgetArgs),
}

#[derive(Args, Debug, Clone)]
struct ClusterArgs {
    /// Number of servers.
    #[arg(short = 'K')]
    k: usize,
    /// Number of output functions.
    #[arg(short = 'Q')]
    q: usize,
    /// Number of input files.
    #[arg(short = 'N')]
    n: usize,
    /// Load redundancy.
    #[arg(short = 'r')]
    r: usize,
    /// Intermediate value size in bits [default: lcm(1..r)].
    #[arg(short = 'T')]
    t: Option<usize>,
}

impl ClusterArgs {
    fn config(&self) -> ClusterConfig {
        match self.t {
            Some(t) => ClusterConfig::from_shape(self.k, self.q, self.n, self.r, t),
            None => ClusterConfig::from_shape_min_bits(self.k, self.q, self.n, self.r),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    cluster: ClusterArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Integer split plan (output of `scdc-plan`); runs S-CDC instead of CDC.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Write the transmission log as JSON lines.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Include payload bits (hex) in the transmission log.
    #[arg(long)]
    payloads: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Figure {
    /// Computation against load redundancy.
    Fig1,
    /// Communication against computation for CDC.
    Fig2,
    /// CDC-fit, S-CDC and the lower bound over a budget sweep.
    Fig3,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(value_enum)]
    figure: Figure,
    #[arg(short = 'K')]
    k: usize,
    #[arg(short = 'Q')]
    q: usize,
    #[arg(short = 'N')]
    n: usize,
    /// Load redundancy; required by fig3, ignored otherwise.
    #[arg(short = 'r')]
    r: Option<usize>,
    #[arg(short = 'T')]
    t: Option<usize>,
    /// First budget [default: NQ].
    #[arg(long, value_parser = parse_rational)]
    budget_min: Option<Rational>,
    /// Last budget [default: minimum CDC computation].
    #[arg(long, value_parser = parse_rational)]
    budget_max: Option<Rational>,
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u32).range(1..))]
    steps: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    #[command(flatten)]
    cluster: ClusterArgs,
    /// Total computation budget (integer, decimal or p/q).
    #[arg(long, value_parser = parse_rational)]
    budget: Rational,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_rational(text: &str) -> Result<Rational, String> {
    cdc_core::rational::parse(text).ok_or_else(|| format!("`{text}` is not an integer, decimal or p/q"))
}

#[derive(Debug)]
enum CliError {
    Config(ConfigError),
    Usage(String),
    Infeasible(String),
    Simulation(SimError),
    Verification(VerificationFailure),
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Simulation(SimError::PlanSize { .. } | SimError::PlanRedundancy { .. }) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Simulation(_) | CliError::Verification(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Usage(msg) | CliError::Infeasible(msg) => write!(f, "{msg}"),
            CliError::Simulation(e) => write!(f, "{e}"),
            CliError::Verification(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Simulation(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<LpError> for CliError {
    fn from(e: LpError) -> Self {
        match e {
            LpError::BudgetInfeasible { .. } => CliError::Infeasible(e.to_string()),
            LpError::SplitOutOfRange { .. } | LpError::PlanSize { .. } => CliError::Usage(e.to_string()),
            other => CliError::Usage(format!("solver error: {other}")),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(&args),
        Command::Curve(args) => commands::curve(&args),
        Command::Bound(args) => commands::bound(&args),
        Command::ScdcPlan(args) => commands::scdc_plan(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
