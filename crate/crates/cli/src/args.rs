//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "nnsft", version, about = "Mixing certificates, entropy and pressure bounds for nearest-neighbour SFTs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for randomized strategies.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (default: all available cores). Results do not depend on it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,

    /// Write the series of a series-producing subcommand to this CSV file.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,

    /// Output style on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    #[serde(skip)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    /// One JSON object per line.
    #[default]
    Json,
    /// Aligned key/value lines for reading.
    Table,
}

/// Where the shift or interaction comes from: a registry model or a JSON file.
#[derive(Args, Debug, Clone, Default, Serialize)]
pub struct InputArgs {
    /// Registry model name (see the `models` subcommand).
    #[arg(long)]
    pub model: Option<String>,
    /// JSON file describing an SFT or an interaction.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Activity (hard_core, lipschitz).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Lattice dimension (default 2).
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of colours (checkerboard).
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of states (potts).
    #[arg(long)]
    pub q: Option<usize>,
    /// Largest absolute value (iceberg).
    #[arg(long = "M", alias = "m")]
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// Largest height (lipschitz).
    #[arg(long)]
    pub g: Option<usize>,
    /// External field (ising).
    #[arg(long = "E", alias = "field")]
    #[serde(rename = "E")]
    pub field: Option<f64>,
    /// Coupling (ising, potts).
    #[arg(long = "J", alias = "coupling")]
    #[serde(rename = "J")]
    pub coupling: Option<f64>,
}

/// How global admissibility is decided when certificates alone do not settle it.
#[derive(Args, Debug, Clone, Default, Serialize)]
pub struct DeciderArgs {
    /// Strong-irreducibility gap to assume instead of the derived one.
    #[arg(long)]
    pub si_gap: Option<u32>,
    /// Periods of the periodic point used outside the band, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub periods: Option<Vec<usize>>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Local and global admissibility of a pattern.
    Admissible(AdmissibleArgs),
    /// Certificate chain, optionally with an exhaustive TSSM check.
    Certify(CertifyArgs),
    /// Structured hunt for a TSSM violation.
    TssmSearch(TssmSearchArgs),
    /// First offenders up to a diameter.
    Offenders(OffendersArgs),
    /// Search for a periodic point.
    Periodic(PeriodicArgs),
    /// Pivot sequence between two patterns on the same shape.
    Pivot(PivotArgs),
    /// Block-count entropy upper bounds, plus exact values in one dimension.
    EntropyBounds(EntropyArgs),
    /// Two-sided pressure bracket.
    Pressure(PressureArgs),
    /// Finite-volume SSM/WSM decay profiles.
    SsmProfile(ProfileArgs),
    /// Closed-form SSM rate and TSSM threshold.
    RateBounds(RateArgs),
    /// List registry models and their parameters.
    Models,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AdmissibleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub decider: DeciderArgs,
    /// Pattern as `x,y=label` entries separated by `;` or spaces.
    #[arg(long)]
    pub pattern: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub decider: DeciderArgs,
    /// Run the exhaustive TSSM check at this gap.
    #[arg(long)]
    pub tssm_gap: Option<u32>,
    /// Wall-clock limit for the exhaustive check.
    #[arg(long, default_value_t = 60.0)]
    pub budget_seconds: f64,
    /// Sample this many partial boundaries of the fillability block (uses --seed).
    #[arg(long)]
    pub spot_check: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TssmSearchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub decider: DeciderArgs,
    /// Distance between the two end patterns.
    #[arg(long)]
    pub gap: u32,
    /// Strategies to try in order (singletons, stripes, rows, combs); default all.
    #[arg(long, value_delimiter = ',')]
    pub strategy: Vec<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OffendersArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub decider: DeciderArgs,
    /// Largest diameter enumerated.
    #[arg(long, default_value_t = 3)]
    pub diameter: u64,
    /// Cap on candidate patterns examined.
    #[arg(long, default_value_t = nnsft_mixing::DEFAULT_OFFENDER_LIMIT)]
    pub limit: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PeriodicArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Periods, comma-separated (default 2 on every axis).
    #[arg(long, value_delimiter = ',')]
    pub periods: Option<Vec<usize>>,
    /// Solver node limit.
    #[arg(long, default_value_t = 10_000_000)]
    pub max_nodes: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PivotArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub decider: DeciderArgs,
    /// Starting pattern.
    #[arg(long)]
    pub from: String,
    /// Target pattern, on the same shape.
    #[arg(long)]
    pub to: String,
    /// TSSM gap to pivot with (default: the certified one).
    #[arg(long)]
    pub gap: Option<u32>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Largest block radius counted.
    #[arg(long, default_value_t = 4)]
    pub n_max: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PressureArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Target bracket width.
    #[arg(long, default_value_t = 0.02)]
    pub epsilon: f64,
    /// Half-rhomboid sizes to try, comma-separated (default 2..=8).
    #[arg(long, value_delimiter = ',')]
    pub schedule: Option<Vec<u32>>,
    /// Periods of the periodic orbit, comma-separated (default 2 on every axis).
    #[arg(long, value_delimiter = ',')]
    pub periods: Option<Vec<usize>>,
    /// Assume TSSM with this gap when none is derived.
    #[arg(long)]
    pub assume_tssm: Option<u32>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Rhomboids,
    Stripe,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Ssm,
    Wsm,
    Both,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub decider: DeciderArgs,
    #[arg(long, value_enum, default_value_t = FamilyName::Rhomboids)]
    pub family: FamilyName,
    /// Stripe letters: the top row starts with `a`, the bottom row with `b`.
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub n_min: u32,
    #[arg(long, default_value_t = 3)]
    pub n_max: u32,
    #[arg(long, value_enum, default_value_t = ProfileKind::Both)]
    pub kind: ProfileKind,
    /// Cap on boundaries enumerated per region.
    #[arg(long, default_value_t = 1 << 22)]
    pub max_boundaries: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RateArgs {
    /// Largest height of the Lipschitz model.
    #[arg(long)]
    pub g: u32,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long)]
    pub lambda: f64,
    /// Rate to test against the TSSM threshold (default: the certified rate).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Alphabet size for the threshold (default g + 1).
    #[arg(long)]
    pub alphabet_size: Option<usize>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Admissible(_) => "admissible",
            Command::Certify(_) => "certify",
            Command::TssmSearch(_) => "tssm-search",
            Command::Offenders(_) => "offenders",
            Command::Periodic(_) => "periodic",
            Command::Pivot(_) => "pivot",
            Command::EntropyBounds(_) => "entropy-bounds",
            Command::Pressure(_) => "pressure",
            Command::SsmProfile(_) => "ssm-profile",
            Command::RateBounds(_) => "rate-bounds",
            Command::Models => "models",
        }
    }

    /// Whether the subcommand produces a series that `--csv` can hold.
    pub fn has_series(&self) -> bool {
        matches!(self, Command::EntropyBounds(_) | Command::Pressure(_) | Command::SsmProfile(_))
    }
}
