use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "invariance", version, about = "Kernel energies, definiteness and discrepancy on finite spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Positive definiteness of a kernel's Gram matrix.
    Classify(ClassifyArgs),
    /// Energy, potential and invariance of a measure.
    Energy(EnergyArgs),
    /// Mercer decomposition of a kernel under a measure.
    Mercer(MercerArgs),
    /// Convolution square root of a kernel under a measure.
    Sqrt(SqrtArgs),
    /// Discrepancy identities, generalized or on spherical caps.
    Stolarsky(StolarskyArgs),
    /// Spherical-cap L² discrepancy of one point set.
    CapDisc(CapDiscArgs),
    /// Gegenbauer coefficients and the Schoenberg sign test.
    Gegenbauer(GegenbauerArgs),
    /// Energy-minimizing point configurations on the sphere.
    Optimize(OptimizeArgs),
    /// Cross-checks the equivalent characterizations of definiteness.
    Harness(HarnessArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StolarskyMode {
    Generalized,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HarnessModeArg {
    Cpd,
    Pd,
    Cspd,
}

/// Output flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct IoArgs {
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// JSON object of flag values; flags given on the command line win.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ClassifyArgs {
    /// Kernel, e.g. `neg-distance`, `riesz:1`, `poly:0,1`, `file:k.json`.
    #[arg(long)]
    pub kernel: Option<String>,
    /// Additive constant.
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<f64>,
    /// Space, e.g. `octahedron`, `sphere:3:fib:32`, `interval:5`.
    #[arg(long)]
    pub space: Option<String>,
    /// Tolerance relative to max |G|.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct EnergyArgs {
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<f64>,
    #[arg(long)]
    pub space: Option<String>,
    /// Measure: `uniform`, `equilibrium`, `dirac:I`, `weights:w0,w1,…`, `file:m.json`.
    #[arg(long, allow_hyphen_values = true)]
    pub measure: Option<String>,
    /// Second measure for the mixed energy.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// Invariance tolerance relative to max |G|.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct MercerArgs {
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<f64>,
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub measure: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct SqrtArgs {
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<f64>,
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub measure: Option<String>,
    /// One sign per Mercer mode, e.g. `+,-,+`; all `+` by default.
    #[arg(long, allow_hyphen_values = true)]
    pub signs: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct StolarskyArgs {
    #[arg(long, value_enum)]
    pub mode: Option<StolarskyMode>,
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<f64>,
    #[arg(long)]
    pub space: Option<String>,
    /// Reference measure μ.
    #[arg(long, allow_hyphen_values = true)]
    pub measure: Option<String>,
    /// Compared measure ν.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Point sets for the classical mode: `icosahedron`, `fib:N`, `random:N[:SEED]`, `file:p.json`.
    #[arg(long, value_delimiter = ',')]
    pub points: Option<Vec<String>>,
    /// Ambient dimension for `fib` and `random` point sets.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Gauss–Legendre nodes per piece of the height integral.
    #[arg(long)]
    pub m_h: Option<usize>,
    /// Fibonacci cap centres.
    #[arg(long)]
    pub n_x: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct CapDiscArgs {
    /// One point set: `icosahedron`, `fib:N`, `random:N[:SEED]`, `file:p.json`.
    #[arg(long)]
    pub points: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub m_h: Option<usize>,
    #[arg(long)]
    pub n_x: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct GegenbauerArgs {
    /// A kernel that depends on ⟨x, y⟩ only.
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<f64>,
    /// Sphere S^{d−1} in R^d.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub m_quad: Option<usize>,
    /// Absolute tolerance on the coefficients.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct OptimizeArgs {
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<f64>,
    /// Number of points.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Stop at this Riemannian gradient norm; 1e-8·N by default.
    #[arg(long)]
    pub gtol: Option<f64>,
    /// Tolerance for the Schoenberg check behind the continuum gap.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct HarnessArgs {
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<f64>,
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub measure: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<HarnessModeArg>,
    /// Random probability probes.
    #[arg(long)]
    pub probes: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub io: IoArgs,
}
