use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mbcoh_core::photon::{DEFAULT_QUAD_POINTS, DEFAULT_WINDOW};
use mbcoh_core::state::DEFAULT_DEGENERACY_TOL;
use mbcoh_core::thermal::DEFAULT_LEVELS;

use crate::table::Format;

/// Normalized many-body coherence of partially distinguishable particles.
#[derive(Debug, Parser)]
#[command(name = "mbcoh", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads; 0 uses all cores, 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file, or output directory for the fig-* commands.
    /// Single-table commands print to stdout when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coherence of N particles with a given single-particle spectrum.
    Coherence(CoherenceArgs),
    /// Thermal-atom sweep over temperature and N, or admissible temperatures.
    Thermal(ThermalArgs),
    /// Arrival-time jitter sweep over σΔ and N, or admissible jitter.
    Photon(PhotonArgs),
    /// Exact coherence against its large-N asymptote.
    Asymptote(AsymptoteArgs),
    /// Write the thermal-atom figure datasets fig1b..fig1e.
    FigThermal(FigThermalArgs),
    /// Write the photon figure datasets fig2b..fig2d.
    FigPhoton(FigPhotonArgs),
    /// Compare the brute-force permutation oracle with the spectral formula.
    OracleCheck(OracleCheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Exact product-state value, (N!·h_N - 1)/(N! - 1).
    Exact,
    /// Symmetric-subspace weight h_N, the N! ≫ 1 form.
    Spectral,
    /// Large-N asymptote from the leading eigenvalue.
    Asymptote,
    /// Faint-distinguishability approximation (1 - ε)^N.
    Faint,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SpectrumSource {
    /// Single-particle eigenvalues, comma-separated (normalized on input).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub eigenvalues: Option<Vec<f64>>,

    /// File with one eigenvalue per line; `#` starts a comment.
    #[arg(long)]
    pub spectrum_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoherenceArgs {
    #[command(flatten)]
    pub source: SpectrumSource,

    /// Particle number.
    #[arg(long)]
    pub n: usize,

    /// Order of the reduced coherence (defaults to N).
    #[arg(long)]
    pub k: Option<usize>,

    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,

    /// Relative gap below which eigenvalues count as degenerate with λ_max.
    #[arg(long, default_value_t = DEFAULT_DEGENERACY_TOL)]
    pub degeneracy_tol: f64,
}

#[derive(Debug, Args)]
pub struct ThermalArgs {
    /// k_B T/ΔE axis, e.g. `0.1,0.5` or `log:0.01:100:121`.
    #[arg(long, required_unless_present = "target")]
    pub kbt: Option<String>,

    #[arg(long, default_value_t = DEFAULT_LEVELS)]
    pub levels: usize,

    /// Particle numbers, e.g. `2..10,100`.
    #[arg(long, default_value = "2")]
    pub n: String,

    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,

    /// Target coherences; switches to admissible-temperature output.
    #[arg(long, conflicts_with = "kbt")]
    pub target: Option<String>,
}

#[derive(Debug, Args)]
pub struct PhotonGrid {
    /// Gauss-Legendre nodes for the arrival-time kernel.
    #[arg(long, default_value_t = DEFAULT_QUAD_POINTS)]
    pub quad_points: usize,

    /// Integration window half-width in units of σ.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: f64,

    /// Tabulated arrival-time density `t P(t)` replacing the Gaussian.
    #[arg(long)]
    pub density_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PhotonArgs {
    /// σΔ axis, e.g. `0,0.1,0.5` or `log:0.01:5:81`.
    #[arg(long, required_unless_present = "target")]
    pub sigma_delta: Option<String>,

    /// Particle numbers, e.g. `2..10,100`.
    #[arg(long, default_value = "2")]
    pub n: String,

    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,

    #[command(flatten)]
    pub grid: PhotonGrid,

    /// Target coherences; switches to admissible-jitter output.
    #[arg(long, conflicts_with = "sigma_delta")]
    pub target: Option<String>,
}

#[derive(Debug, Args)]
pub struct AsymptoteArgs {
    #[command(flatten)]
    pub source: SpectrumSource,

    /// Particle numbers.
    #[arg(long, default_value = "10,100,1000")]
    pub n: String,

    #[arg(long, default_value_t = DEFAULT_DEGENERACY_TOL)]
    pub degeneracy_tol: f64,
}

#[derive(Debug, Args)]
pub struct FigThermalArgs {
    #[arg(long, default_value_t = DEFAULT_LEVELS)]
    pub levels: usize,

    /// Temperatures for fig1b.
    #[arg(long, default_value = "log:0.01:100:121")]
    pub kbt: String,

    /// Particle numbers for fig1b.
    #[arg(long, default_value = "2..100")]
    pub n: String,

    /// Zoomed temperatures for fig1d.
    #[arg(long, default_value = "lin:0.05:1:96")]
    pub zoom_kbt: String,

    /// Particle numbers for fig1d.
    #[arg(long, default_value = "2,10,50,100")]
    pub zoom_n: String,

    /// Target coherences for fig1c.
    #[arg(long, default_value = "0.5,0.9,0.99")]
    pub target: String,

    /// Particle numbers for fig1c.
    #[arg(long, default_value = "2..100")]
    pub target_n: String,

    /// Temperatures for fig1e.
    #[arg(long, default_value = "0.3,0.5,1,2")]
    pub decay_kbt: String,

    /// Particle numbers for fig1e.
    #[arg(long, default_value = "2..200")]
    pub decay_n: String,
}

#[derive(Debug, Args)]
pub struct FigPhotonArgs {
    /// σΔ grid for fig2b.
    #[arg(long, default_value = "0,log:0.01:5:109")]
    pub sigma_delta: String,

    /// Particle numbers for fig2b.
    #[arg(long, default_value = "2..10,100")]
    pub n: String,

    /// Particle numbers that get the faint-approximation column in fig2b.
    #[arg(long, default_value = "2,10,100")]
    pub faint_n: String,

    /// Target coherences for fig2c.
    #[arg(long, default_value = "0.5,0.9,0.99")]
    pub target: String,

    /// Particle numbers for fig2c.
    #[arg(long, default_value = "2..1000")]
    pub target_n: String,

    /// σΔ values for fig2d.
    #[arg(long, default_value = "0.1,0.2,0.5,1")]
    pub decay_sigma_delta: String,

    /// Particle numbers for fig2d.
    #[arg(long, default_value = "2..200")]
    pub decay_n: String,

    #[command(flatten)]
    pub grid: PhotonGrid,
}

#[derive(Debug, Args)]
pub struct OracleCheckArgs {
    /// Largest particle number (at most 6).
    #[arg(long, default_value_t = 5)]
    pub n_max: usize,

    /// Largest internal dimension (at most 3).
    #[arg(long, default_value_t = 3)]
    pub m_max: usize,

    #[arg(long, default_value_t = 50)]
    pub trials: usize,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}
