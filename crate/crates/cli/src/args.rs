use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "nlse",
    version,
    about = "Ground states of the nonlinear Schrödinger equation with power nonlinearity"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Both)]
    pub format: Format,
    /// Worker threads for independent solves (default: logical processors).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub quiet: bool,
    /// File of `key = value` lines using the long flag names.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute one ground state and compare it with the asymptotic estimates.
    Solve(SolveArgs),
    /// Continuation sweep over the interaction strength.
    SweepBeta(SweepBetaArgs),
    /// Continuation sweep over the nonlinearity exponent.
    SweepSigma(SweepSigmaArgs),
    /// Tabulate the boundary-layer profile.
    Layer(LayerArgs),
    /// Solve the infinite-power free-boundary problem in a harmonic trap.
    Shoot(ShootArgs),
    /// Existence and uniqueness verdict for (d, sigma, beta).
    Classify(ClassifyArgs),
    /// Regenerate the data behind a figure.
    Reproduce(ReproduceArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialKind {
    Harmonic,
    Box,
    Lattice,
}

#[derive(Args, Debug, Clone)]
pub struct ProblemArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub dim: u8,
    #[arg(long, value_enum, default_value_t = PotentialKind::Harmonic)]
    pub potential: PotentialKind,
    /// Trap frequency, one value or one per direction.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub gamma: Vec<f64>,
    /// Box lengths, one value or one per direction.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub length: Vec<f64>,
    /// Lattice amplitude.
    #[arg(long, default_value_t = 0.0)]
    pub amplitude: f64,
    /// Lattice wavenumber `k` in `sin^2(k pi x)`.
    #[arg(long, default_value_t = 1.0)]
    pub wavenumber: f64,
    /// Interior nodes per direction (default 511 in 1D, 129 in 2D).
    #[arg(long)]
    pub n: Option<usize>,
    /// Half-width of the trap domain (default from the trap and Thomas-Fermi radius).
    #[arg(long)]
    pub half_width: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_iters: usize,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Embed the profile samples in the JSON record.
    #[arg(long)]
    pub profile: bool,
    /// Solve the rescaled attractive problem (beta < 0, d sigma < 2).
    #[arg(long)]
    pub attractive_limit: bool,
}

#[derive(Args, Debug)]
pub struct SweepBetaArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Explicit list of beta values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1, conflicts_with = "beta_log")]
    pub betas: Option<Vec<f64>>,
    /// `lo,hi,count`: `count` values from 10^lo to 10^hi.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    pub beta_log: Option<Vec<f64>>,
    /// Cold-start every solve and run them in parallel.
    #[arg(long)]
    pub independent: bool,
}

#[derive(Args, Debug)]
pub struct SweepSigmaArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32")]
    pub sigmas: Vec<f64>,
    #[arg(long)]
    pub independent: bool,
}

#[derive(Args, Debug)]
pub struct LayerArgs {
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 6.0)]
    pub xcut: f64,
}

#[derive(Args, Debug)]
pub struct ShootArgs {
    #[arg(long, value_delimiter = ',', default_value = "6")]
    pub gamma: Vec<f64>,
    /// Profile sample spacing.
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    /// Known best constant for the critical case.
    #[arg(long, conflicts_with = "estimate_cb")]
    pub cb: Option<f64>,
    /// Estimate the best constant numerically (d = 1 or 2).
    #[arg(long)]
    pub estimate_cb: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    #[value(name = "fig1")]
    Fig1,
    #[value(name = "fig2")]
    Fig2,
    #[value(name = "fig3")]
    Fig3,
    #[value(name = "fig4")]
    Fig4,
    #[value(name = "fig5")]
    Fig5,
    #[value(name = "fig6")]
    Fig6,
    #[value(name = "fig7")]
    Fig7,
    #[value(name = "fig8")]
    Fig8,
    #[value(name = "fig8_1d")]
    Fig8OneD,
    #[value(name = "fig9")]
    Fig9,
    #[value(name = "figA")]
    FigA,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    /// Interior nodes per direction for 2D figures.
    #[arg(long, default_value_t = 129, value_parser = clap::value_parser!(u64).range(3..=257))]
    pub n2d: u64,
}
