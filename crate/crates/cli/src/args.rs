//! Command-line definitions.

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "chsh-forge",
    about = "Simulate CHSH experiments over hidden-variable models, test the \
             no-conspiracy / parameter-independence / outcome-independence \
             assumptions, replay the reordering proof, and verify the bound chain.",
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline: generate a table, test assumptions, replay the
    /// proof, verify the chain, and emit a JSON report.
    Run(RunArgs),
    /// Replay the proof on an externally supplied table CSV.
    Prove(ProveArgs),
    /// Convergence study: run the pipeline over a grid of trial counts and
    /// seeds.
    Sweep(SweepArgs),
}

#[derive(Debug, Args, Clone)]
pub struct ModelArgs {
    /// Model name: deterministic | memory | clocked | singlet | prbox |
    /// signaling (and "leaky", a diagnostic model that violates the
    /// communication lifecycle).
    #[arg(long)]
    pub model: String,

    /// Signaling model: leak strength in [0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub leak: f64,

    /// Singlet model: comma-separated analyzer angles "a,ap,b,bp" in
    /// radians. Default: the CHSH-optimal configuration.
    #[arg(long)]
    pub angles: Option<String>,

    /// Clocked model: clock period in trials.
    #[arg(long, default_value_t = 7)]
    pub clock_period: usize,

    /// Clocked model: bias modulation amplitude in [0, 0.5].
    #[arg(long, default_value_t = 0.3)]
    pub clock_amplitude: f64,

    /// Memory model rule: coin | flip | period2.
    #[arg(long, default_value = "flip")]
    pub memory_rule: String,

    /// Memory model: bias shift for the "flip" rule.
    #[arg(long, default_value_t = 0.3)]
    pub memory_delta: f64,

    /// Deterministic model strategy: plus | alternating | enumerate |
    /// random.
    #[arg(long, default_value = "enumerate")]
    pub strategy: String,

    /// Deterministic model: period of the "random" strategy.
    #[arg(long, default_value_t = 16)]
    pub strategy_period: usize,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Setting source: uniform | conspiracy:max | conspiracy:min.
    #[arg(long, default_value = "uniform")]
    pub source: String,

    /// Number of trials.
    #[arg(long)]
    pub trials: usize,

    /// Run seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Significance level for the assumption tests and tolerances.
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,

    /// Permutation-test iterations for the no-conspiracy check.
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,

    /// Write the JSON report here (stdout when omitted).
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,

    /// Optionally export the outcome table as CSV.
    #[arg(long)]
    pub table: Option<std::path::PathBuf>,

    /// Optionally export the joint table as CSV (only written when the
    /// proof replay succeeds).
    #[arg(long)]
    pub joint: Option<std::path::PathBuf>,

    /// Suppress the timestamp so reports are byte-reproducible.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct ProveArgs {
    /// Outcome-table CSV (tabulator format).
    #[arg(long)]
    pub table: std::path::PathBuf,

    /// Row-count tolerance for the matching steps. Default: the stat-lab
    /// multiset tolerance at alpha/4.
    #[arg(long)]
    pub tolerance: Option<usize>,

    /// Significance level used when deriving the default tolerance.
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,

    /// Write the JSON report here (stdout when omitted).
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,

    /// Optionally export the joint table as CSV.
    #[arg(long)]
    pub joint: Option<std::path::PathBuf>,

    /// Suppress the timestamp so reports are byte-reproducible.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Setting source: uniform | conspiracy:max | conspiracy:min.
    #[arg(long, default_value = "uniform")]
    pub source: String,

    /// Comma-separated list of trial counts (at least two).
    #[arg(long)]
    pub trials_list: String,

    /// Number of seeds per trial count (seeds run from --seed upward).
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,

    /// Base seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Significance level.
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,

    /// Write the JSON report here (stdout when omitted).
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,

    /// Suppress the timestamp so reports are byte-reproducible.
    #[arg(long)]
    pub no_timestamp: bool,
}
