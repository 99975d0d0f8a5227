use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "ferrojet", version, about = "Solitary waves on a ferrofluid jet: spectra, coefficients and profiles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample one of the critical curves C1..C4 as CSV.
    Curves(CurvesArgs),
    /// Count purely imaginary and real eigenvalues at (beta0, gamma0).
    Classify(ClassifyArgs),
    /// Normal-form coefficients for a region and magnetisation law.
    Coeffs(CoeffsArgs),
    /// Leading-order free-surface profile of a solitary wave.
    Solve(SolveArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
    /// Langevin parameter at which the region I wave changes polarity.
    LangevinThreshold(ThresholdArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveName {
    C1,
    C2,
    C3,
    C4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LawKind {
    Linear,
    Langevin,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionName {
    I,
    ICubic,
    Ii,
    IiCubic,
    Iii,
}

impl RegionName {
    pub fn label(self) -> &'static str {
        match self {
            RegionName::I => "I",
            RegionName::ICubic => "I-cubic",
            RegionName::Ii => "II",
            RegionName::IiCubic => "II-cubic",
            RegionName::Iii => "III",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionName {
    BasisConsistent,
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaName {
    /// θ = 0
    #[value(name = "0")]
    #[serde(rename = "0")]
    Zero,
    /// θ = π
    #[value(name = "pi")]
    #[serde(rename = "pi")]
    Pi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchName {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Omega,
    Chains,
    Taylor,
    Reversibility,
    All,
}

/// Magnetisation law selection shared by the law-dependent commands.
#[derive(Debug, Clone, Default, Args)]
pub struct LawArgs {
    /// Magnetisation law.
    #[arg(long, value_enum)]
    pub law: Option<LawKind>,
    /// Langevin parameter λ > 0.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// m₁′(1) for a custom law.
    #[arg(long)]
    pub m1p: Option<f64>,
    /// m₁″(1) for a custom law.
    #[arg(long)]
    pub m1pp: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// TOML file with [law] and [run] sections; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[arg(value_enum)]
    pub curve: CurveName,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub beta0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma0: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, value_enum)]
    pub region: Option<RegionName>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    #[command(flatten)]
    pub law: LawArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub region: Option<RegionName>,
    /// Small bifurcation parameter μ > 0
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Surface-tension parameter β₀ of the region I base point (> 1/4)
    #[arg(long, allow_negative_numbers = true)]
    pub beta0: Option<f64>,
    /// Carrier wavenumber of the region III wave train
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Detuning δ of the region II equation.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Scaled quadratic coefficient κ̌ of the cubic systems.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Carrier phase of the region III wave train.
    #[arg(long, value_enum)]
    pub theta: Option<ThetaName>,
    /// Sign of the cubic-system solution.
    #[arg(long, value_enum)]
    pub branch: Option<BranchName>,
    #[arg(long, value_enum)]
    pub convention: Option<ConventionName>,
    /// Half-length of the region II solution window.
    #[arg(long)]
    pub half_length: Option<f64>,
    /// Grid intervals on the region II half-window.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Also plot the profile to this SVG file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Also write the reduced orbit (Z, u and derivatives) to this CSV file.
    #[arg(long)]
    pub orbit: Option<PathBuf>,
    #[command(flatten)]
    pub law: LawArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: SuiteName,
    #[command(flatten)]
    pub law: LawArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha0: f64,
    #[command(flatten)]
    pub common: Common,
}
