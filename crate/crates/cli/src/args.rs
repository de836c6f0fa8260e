use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tlbm_core::simulator::Side;

use crate::select::ModelArgs;

/// Thermal lattice Boltzmann models: derivation, equilibria and shock-tube checks.
///
/// Exit codes: 0 success, 1 usage error, 2 numerical failure (no root,
/// vacuum), 3 expectation violated. Set TLBM_WORKERS to fix the worker count.
#[derive(Debug, Parser)]
#[command(name = "tlbm", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for every model on a rational lattice.
    Derive(DeriveArgs),
    /// Tabulate solutions or polynomial residuals along one free parameter.
    Sweep(SweepArgs),
    /// Dump the exact coefficients of a truncated equilibrium.
    Expand(ExpandArgs),
    /// Check discrete equilibrium moments against the continuous ones.
    Verify(VerifyArgs),
    /// Run the shock tube.
    Simulate(SimulateArgs),
    /// Solve the exact Riemann problem and optionally sample a profile.
    Riemann(RiemannArgs),
    /// Error metrics between a snapshot CSV and a reference.
    Compare(CompareArgs),
    /// Stability verdicts over a grid of models, densities, τ and expansions.
    StabilityScan(ScanArgs),
    /// List the built-in published models, regenerated.
    Catalog(CatalogArgs),
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    #[arg(long)]
    pub q: usize,
    /// Ratios p̄₄, p̄₆, … comma separated; omit for q = 3.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub ratios: String,
    /// Weights below this magnitude are flagged as ghosts.
    #[arg(long, default_value_t = tlbm_core::model::DEFAULT_GHOST_THRESHOLD)]
    pub ghost_threshold: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub q: usize,
    /// Ratios p̄₄, p̄₆, … with the swept one written as `x`.
    #[arg(long, default_value = "")]
    pub ratios: String,
    #[arg(long)]
    pub from: Option<String>,
    #[arg(long)]
    pub to: Option<String>,
    #[arg(long)]
    pub step: Option<String>,
    /// Interpret `x` as r = 1/p̄ rather than p̄.
    #[arg(long)]
    pub reciprocal: bool,
    /// Emit the polynomial residual on a v₂ grid `lo:hi:n` instead of solutions.
    #[arg(long)]
    pub v2_grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    /// Expansion label such as TE3 or HE10.
    pub spec: String,
    /// Reference temperature of a Taylor expansion.
    #[arg(long, default_value = "1")]
    pub theta0: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub expansion: String,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Points per axis of the (u, θ) sample grid.
    #[arg(long, default_value_t = 3)]
    pub grid: usize,
    #[arg(long, default_value = "-0.2:0.2")]
    pub u_range: String,
    #[arg(long, default_value = "0.8:1.2")]
    pub theta_range: String,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub expansion: Option<String>,
    #[arg(long)]
    pub rho_bar: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub interface: Option<usize>,
    #[arg(long, value_enum)]
    pub dense_side: Option<SideArg>,
    #[arg(long)]
    pub snapshot_interval: Option<usize>,
    /// Two probe nodes, `a,b`.
    #[arg(long)]
    pub probes: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Exit with code 3 when the run is unstable.
    #[arg(long)]
    pub expect_stable: bool,
}

#[derive(Debug, Args)]
pub struct RiemannArgs {
    /// Left state `rho,u,theta`.
    #[arg(long, default_value = "3,0,1", allow_hyphen_values = true)]
    pub left: String,
    /// Right state `rho,u,theta`.
    #[arg(long, default_value = "1,0,1", allow_hyphen_values = true)]
    pub right: String,
    #[arg(long, default_value_t = tlbm_core::riemann::GAMMA_1D)]
    pub gamma: f64,
    /// Write the sampled profile to this CSV.
    #[arg(long, requires_all = ["time", "dx"])]
    pub profile: Option<PathBuf>,
    /// Elapsed time in lattice steps.
    #[arg(long)]
    pub time: Option<f64>,
    /// Node spacing.
    #[arg(long)]
    pub dx: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub nodes: usize,
    /// First node of the right state.
    #[arg(long, default_value_t = 500)]
    pub interface: usize,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Snapshot CSV to assess.
    pub simulation: PathBuf,
    /// `run.json` written by `simulate`; supplies the exact reference.
    #[arg(long, conflicts_with = "reference")]
    pub run: Option<PathBuf>,
    /// Another snapshot CSV to compare against.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Elapsed steps for an exact reference built from flags.
    #[arg(long, conflicts_with_all = ["run", "reference"], requires = "dx")]
    pub time: Option<usize>,
    /// Node spacing for an exact reference built from flags.
    #[arg(long)]
    pub dx: Option<f64>,
    #[arg(long, default_value_t = 3.0)]
    pub rho_bar: f64,
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub dense_side: SideArg,
    #[arg(long, default_value_t = 500)]
    pub interface: usize,
    /// Probe nodes `a,b` (default: those of the run, else 430,650).
    #[arg(long)]
    pub probes: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Catalog ids, comma separated.
    #[arg(long)]
    pub models: String,
    #[arg(long)]
    pub rho_bars: String,
    #[arg(long, default_value = "1")]
    pub taus: String,
    /// Expansion labels, comma separated.
    #[arg(long)]
    pub expansions: String,
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub dense_side: SideArg,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
}
