//! Command-line arguments. Each subcommand's arguments also deserialise
//! from the `params` table of a run configuration, with unknown keys
//! rejected.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "polycurve", version, about = "Polyharmonic curves on spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a constructed family or a curve file against its equations.
    Verify(VerifyArgs),
    /// Evaluate one residual on a curve file.
    Residual(ResidualArgs),
    /// Test the helix relation on (K, r, k, tau) tuples.
    Classify(ClassifyArgs),
    /// Solve a frequency polynomial or an algebraic critical-point system.
    Solve(SolveArgs),
    /// Run a gradient flow of the r-energy.
    Minimize(MinimizeArgs),
    /// Residual scan over a parameter grid.
    Sweep(SweepArgs),
    /// Evaluate the curvature expression on k1 = alpha/s, k2 = beta/s.
    Probe(ProbeArgs),
    /// Write a constructed curve to a curve file.
    Curve(CurveArgs),
    /// Execute a run configuration file.
    Run(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `make_r_circle(r)`.
    RCircle,
    /// Biharmonic superposition with `b^2 = 2 - a^2`; needs `--a`.
    BiharmonicTwoFreq,
    GreatCircle,
}

/// Set by the top-level `output` and `format` keys of a run configuration.
#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyArgs {
    #[arg(long, value_enum, conflicts_with = "curve")]
    pub family: Option<Family>,
    /// Curve JSON file to verify instead of a family.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Frequency `a` of the biharmonic two-frequency family.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

impl Default for VerifyArgs {
    fn default() -> Self {
        Self {
            family: None,
            curve: None,
            r: 2,
            a: None,
            samples: None,
            tol: 1e-8,
            output: OutputArgs::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidualChoice {
    Intrinsic,
    Geodesic,
    Biharmonic,
    Triharmonic,
    Fourharmonic,
    Extrinsic,
    EulerLagrange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Expanded,
    Grid,
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResidualArgs {
    #[arg(long)]
    pub curve: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ResidualChoice::Intrinsic)]
    pub kind: ResidualChoice,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Lagrangian id for `euler-lagrange`, e.g. `triharmonic` or `extrinsic_2`.
    #[arg(long)]
    pub lagrangian: Option<String>,
    /// Sectional curvature of the space form.
    #[arg(long = "K", default_value_t = 1.0)]
    #[serde(rename = "K")]
    pub curvature: f64,
    #[arg(long, value_enum)]
    pub route: Option<Route>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

impl Default for ResidualArgs {
    fn default() -> Self {
        Self {
            curve: None,
            kind: ResidualChoice::Intrinsic,
            r: 2,
            lagrangian: None,
            curvature: 1.0,
            route: None,
            samples: None,
            output: OutputArgs::default(),
        }
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifyArgs {
    /// CSV file with columns `K, r, k, tau`.
    #[arg(long, conflicts_with_all = ["curvature", "r", "k", "tau"])]
    pub input: Option<PathBuf>,
    #[arg(long = "K", requires_all = ["r", "k", "tau"])]
    #[serde(rename = "K")]
    pub curvature: Option<f64>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
#[allow(clippy::enum_variant_names)]
pub enum System {
    /// Frequency polynomial of single circles; needs `--r`.
    SingleFreq,
    /// Two-frequency triharmonic system over the default seed grid.
    TriharmonicTwoFreq,
    /// Three-frequency biharmonic system.
    BiharmonicThreeFreq,
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveArgs {
    #[arg(long, value_enum, default_value_t = System::SingleFreq)]
    pub system: System,
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    /// Use every n-th seed of the default grid.
    #[arg(long, default_value_t = 1)]
    pub seed_stride: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

impl Default for SolveArgs {
    fn default() -> Self {
        Self {
            system: System::SingleFreq,
            r: 3,
            seed_stride: 1,
            output: OutputArgs::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Restricted,
    Full,
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MinimizeArgs {
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Sample count.
    #[arg(long = "N", default_value_t = 128)]
    #[serde(rename = "N")]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Mode::Restricted)]
    pub mode: Mode,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
    /// Seed of the perturbed great circle that starts a full flow.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Squared radius of the starting circle of a restricted flow.
    #[arg(long, default_value_t = 0.4)]
    pub alpha_sq: f64,
    /// Perturbation size of the starting curve of a full flow.
    #[arg(long, default_value_t = 0.05)]
    pub amplitude: f64,
    /// Starting curve file, overriding the generated start.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    #[arg(long)]
    pub allow_r4: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

impl Default for MinimizeArgs {
    fn default() -> Self {
        Self {
            r: 2,
            samples: 128,
            mode: Mode::Restricted,
            max_iters: 5000,
            seed: 0,
            alpha_sq: 0.4,
            amplitude: 0.05,
            curve: None,
            allow_r4: false,
            output: OutputArgs::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepFamily {
    /// Unit-speed circles over an `a^2` grid, intrinsic `r`-tension.
    SingleFreq,
    /// Unit-speed two-frequency curves over an `(a^2, b^2)` grid,
    /// biharmonic residual.
    TwoFreq,
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = SweepFamily::SingleFreq)]
    pub family: SweepFamily,
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    #[arg(long, default_value_t = 0.5)]
    pub a_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub a_max: f64,
    #[arg(long, default_value_t = 91)]
    pub a_count: usize,
    #[arg(long, default_value_t = 0.1)]
    pub b_min: f64,
    #[arg(long, default_value_t = 1.9)]
    pub b_max: f64,
    #[arg(long, default_value_t = 19)]
    pub b_count: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

impl Default for SweepArgs {
    fn default() -> Self {
        Self {
            family: SweepFamily::SingleFreq,
            r: 3,
            a_min: 0.5,
            a_max: 5.0,
            a_count: 91,
            b_min: 0.1,
            b_max: 1.9,
            b_count: 19,
            output: OutputArgs::default(),
        }
    }
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub s_min: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub s_max: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

impl Default for ProbeArgs {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 2.0,
            s_min: 1.0,
            s_max: 10.0,
            points: 200,
            output: OutputArgs::default(),
        }
    }
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurveArgs {
    #[arg(long, value_enum, default_value_t = Family::RCircle)]
    pub family: Family,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long)]
    pub a: Option<f64>,
    /// Write a discrete curve with this many samples instead of the ansatz.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Default for CurveArgs {
    fn default() -> Self {
        Self {
            family: Family::RCircle,
            r: 2,
            a: None,
            samples: None,
            out: None,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// TOML run configuration.
    pub config: PathBuf,
}
