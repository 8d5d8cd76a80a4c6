use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "symtomo", version, about = "Symplectic and spin tomography toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tomogram w(X; mu, nu) of a state at one frame.
    Tomogram(TomogramArgs),
    /// Wigner function from the position density kernel.
    Wigner(WignerArgs),
    /// Wigner function recovered from a tomogram family, or a spin density
    /// matrix recovered from spin tomograms.
    Reconstruct(ReconstructArgs),
    /// Distribution function F(X) of a quadrature, or spin atoms.
    Measure(MeasureArgs),
    /// Spin tomogram at one or more angle triples.
    Spin(SpinArgs),
    /// Star product of two operators' measures, or the symbol grid of one.
    Star(StarArgs),
    /// Tomogram evolution under a quadratic potential.
    Evolve(EvolveArgs),
    /// Checks the density-operator axioms of a state.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Options every subcommand accepts.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Common {
    /// State: a shorthand (vacuum, fock:N, coherent:RE,IM, up, down), inline
    /// TOML, or the path of a TOML file.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,

    /// Output file; standard output when omitted.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    #[serde(default)]
    pub format: Format,

    /// Grid preset (coarse, standard, fine). Falls back to the
    /// SYMTOMO_GRID_PRESET environment variable, then to standard.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,

    /// Number-basis truncation.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,

    /// Half width of the sampled X (or q, p) range.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_half_width: Option<f64>,

    /// Number of X samples.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_points: Option<usize>,

    /// TOML file whose keys override the flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum TomogramRoute {
    /// Wavefunction for pure states, number basis otherwise.
    #[default]
    Auto,
    Wavefunction,
    Density,
    Fock,
    Wigner,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct TomogramArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long, value_enum, default_value_t = TomogramRoute::Auto)]
    #[serde(default)]
    pub route: TomogramRoute,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct WignerArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Samples per phase-space axis.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wigner_points: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReconstructArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Samples per axis of the reconstructed Wigner grid.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wigner_points: Option<usize>,
    /// Half side of the (mu, nu) square of the tomogram family.
    #[arg(long, default_value_t = 7.0)]
    pub family_half_width: f64,
    /// Nodes per side of the family (even).
    #[arg(long, default_value_t = 56)]
    pub family_nodes: usize,
    /// Spin only: CSV of angle triples `phi,psi,theta` at which the state's
    /// tomograms are simulated.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<PathBuf>,
    /// Spin only: measured tomograms, CSV `phi,psi,theta,m,prob`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tomograms: Option<PathBuf>,
    /// Spin quantum number for `--tomograms` input.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum MeasureRoute {
    /// Spectral measure of the truncated quadrature operator.
    #[default]
    Operator,
    /// Integral of the tomogram.
    Tomogram,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct MeasureArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long, value_enum, default_value_t = MeasureRoute::Operator)]
    #[serde(default)]
    pub route: MeasureRoute,
    #[command(flatten)]
    #[serde(flatten)]
    pub angles: AngleArgs,
}

/// Euler angles for spin quantities.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct AngleArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    #[serde(default)]
    pub phi: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    #[serde(default)]
    pub psi: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SpinArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Expected spin quantum number; checked against the state.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub angles: AngleArgs,
    /// CSV of angle triples `phi,psi,theta`; overrides the single angles.
    #[arg(long = "angles")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum StarMode {
    /// Distribution function of the product a*b at the target frame.
    #[default]
    Product,
    /// Symbol grid of the first operator.
    Symbol,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum StarRoute {
    #[default]
    Operator,
    Kernel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum LayoutChoice {
    #[default]
    Coarse,
    Standard,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct StarArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Second operator (state spec); defaults to the first.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_b: Option<String>,
    #[arg(long, value_enum, default_value_t = StarMode::Product)]
    #[serde(default)]
    pub mode: StarMode,
    #[arg(long, value_enum, default_value_t = StarRoute::Operator)]
    #[serde(default)]
    pub route: StarRoute,
    #[arg(long, value_enum, default_value_t = LayoutChoice::Coarse)]
    #[serde(default)]
    pub layout: LayoutChoice,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub nu: f64,
    /// Number of target X points for the product (at most 10 on the kernel route).
    #[arg(long, default_value_t = 5)]
    pub targets: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EvolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Potential V = a2 q^2 + a1 q + a0.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
    pub a2: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub a1: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub a0: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_max: f64,
    /// Number of time samples including t = 0.
    #[arg(long, default_value_t = 11)]
    pub t_steps: usize,
    /// Half side of the (mu, nu) square sampled for the initial family.
    #[arg(long, default_value_t = 2.5)]
    pub family_half_width: f64,
    #[arg(long, default_value_t = 64)]
    pub family_nodes: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ValidateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}
