//! Argument definitions for every subcommand.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use tbs_core::TimelineField;

#[derive(Debug, Parser)]
#[command(
    name = "tbs",
    version,
    about = "Periodic check/attack game engine: analytic payoffs, event-loop \
             simulation, best responses, equilibrium search, and incident \
             timing statistics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate both players' analytic payoffs for one strategy pair
    Payoff(PayoffArgs),
    /// Run the event-loop simulation and compare it with the analytic payoffs
    Simulate(SimulateArgs),
    /// Compute one player's best response to a fixed opponent period
    Br(BrArgs),
    /// Tabulate best responses across a range of opponent periods
    Sweep(SweepArgs),
    /// Search a period grid for approximate equilibria
    Nash(NashArgs),
    /// Incident-data statistics
    #[command(subcommand)]
    Veris(VerisCommand),
}

/// Game parameters, either as flags or loaded from `--params-json` (explicit
/// flags win).
#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Attack duration (time an attack needs to complete)
    #[arg(long = "p", value_name = "TIME")]
    pub p: Option<f64>,
    /// Detection delay after a check finds the compromise
    #[arg(long = "d", value_name = "TIME")]
    pub d: Option<f64>,
    /// Reaction delay until the reset takes effect
    #[arg(long = "r", value_name = "TIME")]
    pub r: Option<f64>,
    /// Cost of one reset
    #[arg(long = "cd", value_name = "COST")]
    pub cd: Option<f64>,
    /// Cost of one check
    #[arg(long = "ck", value_name = "COST")]
    pub ck: Option<f64>,
    /// Cost of one attack launch
    #[arg(long = "ca", value_name = "COST")]
    pub ca: Option<f64>,
    /// JSON file with the parameters (protection, detection, reaction,
    /// reset_cost, check_cost, attack_cost); flags override its values
    #[arg(long = "params-json", value_name = "PATH")]
    pub params_json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlayerArg {
    Defender,
    Attacker,
}

#[derive(Debug, Args)]
pub struct PayoffArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Defender check period
    #[arg(long = "td", value_name = "TIME")]
    pub td: f64,
    /// Attacker launch period
    #[arg(long = "ta", value_name = "TIME")]
    pub ta: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Defender check period
    #[arg(long = "td", value_name = "TIME")]
    pub td: f64,
    /// Attacker launch period
    #[arg(long = "ta", value_name = "TIME")]
    pub ta: f64,
    /// Attacker periods to simulate per replication (the first ten are
    /// warm-up)
    #[arg(long = "horizon-periods", value_name = "N", default_value_t = 1000)]
    pub horizon_periods: u32,
    /// Number of independent replications
    #[arg(long = "reps", value_name = "R", default_value_t = 20)]
    pub reps: u32,
    /// Random seed
    #[arg(long = "seed", value_name = "S", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct BrArgs {
    /// Which player responds
    #[arg(value_enum)]
    pub player: PlayerArg,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Attacker launch period (when the defender responds)
    #[arg(long = "ta", value_name = "TIME")]
    pub ta: Option<f64>,
    /// Defender check period (when the attacker responds)
    #[arg(long = "td", value_name = "TIME")]
    pub td: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Which player responds at every grid point
    #[arg(long, value_enum)]
    pub player: PlayerArg,
    /// First opponent period
    #[arg(long, value_name = "TIME")]
    pub from: f64,
    /// Last opponent period
    #[arg(long, value_name = "TIME")]
    pub to: f64,
    /// Grid step
    #[arg(long, value_name = "TIME")]
    pub step: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct NashArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Largest period on the search grid (default: ten times the period
    /// floor)
    #[arg(long = "tmax", value_name = "TIME")]
    pub tmax: Option<f64>,
    /// Grid step
    #[arg(long = "grid-step", value_name = "TIME", default_value_t = 0.1)]
    pub grid_step: f64,
    /// Largest unilateral-deviation gain an equilibrium may allow
    #[arg(long = "eps", value_name = "UTILITY", default_value_t = 1e-3)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}

#[derive(Debug, Subcommand)]
pub enum VerisCommand {
    /// Duration statistics over a directory of incident documents
    Stats(VerisStatsArgs),
}

#[derive(Debug, Args)]
pub struct VerisStatsArgs {
    /// Directory of incident JSON documents (one incident per file)
    #[arg(long, value_name = "PATH")]
    pub dir: PathBuf,
    /// Comma-separated action categories to keep
    #[arg(long, value_name = "LIST", default_value = "malware,hacking")]
    pub actions: String,
    /// Timeline field to analyze
    #[arg(long, value_name = "FIELD")]
    pub field: TimelineField,
    /// Histogram bin width in days
    #[arg(long = "bin-days", value_name = "DAYS", default_value_t = 60.0)]
    pub bin_days: f64,
    /// Containment outlier cap in days; zero or negative disables it
    #[arg(long = "cap-days", value_name = "DAYS", default_value_t = 3285.0)]
    pub cap_days: f64,
    /// Use mean calendar month/year lengths (30.44/365.25 days) instead of
    /// the flat 30/365 defaults
    #[arg(long = "calendar-mean")]
    pub calendar_mean: bool,
    /// Check the reference-snapshot discovery statistics and fail if they
    /// do not hold
    #[arg(long = "snapshot-assertions")]
    pub snapshot_assertions: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}
