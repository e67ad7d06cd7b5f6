use clap::{Args, Parser, Subcommand, ValueEnum};
use coopkit::cooperation::Mode;
use coopkit::rational::{self, Rational};

/// Cooperation events in repeated games with uncertain discount factors.
#[derive(Debug, Parser)]
#[command(name = "coopkit", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a belief space (and optionally a game) and report each invariant.
    Validate(ValidateArgs),
    /// Thresholds, the largest pair of cooperation events, and optional checks.
    Analyze(AnalyzeArgs),
    /// Almost-complete-information checks and robust profiles.
    Robust(RobustArgs),
    /// Run a built-in example end to end against its expected outcomes.
    Demo(DemoArgs),
    /// Print a built-in space or game as JSON.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Bayesian,
    Icr,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Bayesian => Mode::Bayesian,
            ModeArg::Icr => Mode::Icr,
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Belief space: a JSON path or a built-in name.
    #[arg(long)]
    pub space: String,
    /// Stage game: a JSON path, `pd`, `g3x3` or `g3x3:a=<p/q>`.
    #[arg(long)]
    pub game: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub space: String,
    #[arg(long, default_value = "pd")]
    pub game: String,
    /// List every pair of cooperation events (bounded by the budget).
    #[arg(long)]
    pub enumerate: bool,
    /// Build the candidate pair from `C1={..} C2={..}`. Items are state
    /// names or own discount factors.
    #[arg(long, num_args = 2, value_names = ["C1", "C2"])]
    pub candidate: Option<Vec<String>>,
    /// Check `K1={..} K2={..}` directly.
    #[arg(long, num_args = 2, value_names = ["K1", "K2"])]
    pub check: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "bayesian")]
    pub mode: ModeArg,
    /// Cross-check every reported pair with the payoff oracle.
    #[arg(long)]
    pub oracle: bool,
    /// Enumeration budget; defaults to `COOPKIT_BUDGET` or 2^20.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RobustArgs {
    #[arg(long)]
    pub space: String,
    #[arg(long, default_value = "pd")]
    pub game: String,
    /// Mass check of the common-belief region.
    #[arg(long)]
    pub ms: bool,
    /// Every player at every state believes some nature state is common belief.
    #[arg(long)]
    pub strong: bool,
    /// Conditional grim trigger on constant `1-ε` thresholds.
    #[arg(long)]
    pub profile: bool,
    /// Conditional grim trigger on `f` with slack `ε'` (two actions only).
    #[arg(long = "f-eps")]
    pub f_eps: bool,
    #[arg(long, value_parser = parse_rational)]
    pub eps: Rational,
    /// Allowed missing mass for `--ms`; defaults to ε.
    #[arg(long, value_parser = parse_rational)]
    pub delta: Option<Rational>,
    /// Slack for `--f-eps`; defaults to the smallest admissible value.
    #[arg(long = "eps-prime", value_parser = parse_rational)]
    pub eps_prime: Option<Rational>,
    /// Per-nature-state reading of the strong definition.
    #[arg(long = "per-nature")]
    pub per_nature: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// Example name; omit with `--all` to run every example.
    pub name: Option<String>,
    #[arg(long, conflicts_with = "name")]
    pub all: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Built-in space name.
    #[arg(long, required_unless_present = "game", conflicts_with = "game")]
    pub space: Option<String>,
    /// Built-in game name.
    #[arg(long)]
    pub game: Option<String>,
}
