use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "polyshadow", version, about = "Expected face numbers of random polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expected face numbers of projected regular polytopes or Gaussian models.
    Expected(ExpectedArgs),
    /// Empirical face numbers from replicated random draws.
    Simulate(SimulateArgs),
    /// Expected face numbers over a range of n, flagging strict increases.
    Monotonicity(MonotonicityArgs),
    /// Expected face numbers with a Poisson number of points.
    Poisson(PoissonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Monte Carlo samples per angle.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Master random seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Report file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Plain-text cache of Monte Carlo angles, read before and appended after the run.
    #[arg(long)]
    pub angle_cache: Option<PathBuf>,
    /// Worker threads (0: one per core).
    #[arg(long, env = "POLYSHADOW_WORKERS", default_value_t = 0)]
    pub workers: usize,
    /// Fill the wall-time column (makes reports differ between runs).
    #[arg(long)]
    pub timing: bool,
}

/// Face dimensions to report.
#[derive(Args, Debug, Clone)]
pub struct Faces {
    /// Face dimension; repeat or separate with commas.
    #[arg(long, value_delimiter = ',', conflicts_with = "all_k")]
    pub k: Vec<usize>,
    /// Every face dimension up to the polytope dimension.
    #[arg(long)]
    pub all_k: bool,
}

#[derive(Args, Debug)]
pub struct ExpectedArgs {
    /// Regular polytope family to project: simplex, crosspolytope or cube.
    #[arg(long, required_unless_present = "model", conflicts_with = "model")]
    pub family: Option<String>,
    /// Gaussian model: gaussian, symmetric or zonotope.
    #[arg(long)]
    pub model: Option<String>,
    /// Polytope dimension, or number of points for a model.
    #[arg(long)]
    pub n: usize,
    /// Projection dimension.
    #[arg(long)]
    pub d: usize,
    #[command(flatten)]
    pub faces: Faces,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// gaussian, symmetric, zonotope, projected_simplex, projected_crosspolytope or projected_cube.
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    /// Replications.
    #[arg(long, default_value_t = 100_000)]
    pub reps: u64,
    /// Write every replication's face numbers to this file.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    #[command(flatten)]
    pub faces: Faces,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct MonotonicityArgs {
    /// Families to tabulate; repeat or separate with commas.
    #[arg(long, value_delimiter = ',', required_unless_present = "model")]
    pub family: Vec<String>,
    /// Gaussian models to tabulate.
    #[arg(long, value_delimiter = ',')]
    pub model: Vec<String>,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n_min: usize,
    #[arg(long)]
    pub n_max: usize,
    #[command(flatten)]
    pub faces: Faces,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct PoissonArgs {
    /// gaussian, symmetric or zonotope.
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub d: usize,
    /// Intensities; repeat or separate with commas.
    #[arg(long, value_delimiter = ',', required_unless_present = "t_range")]
    pub t: Vec<f64>,
    /// Intensity grid `start:stop:step`, both ends included.
    #[arg(long, conflicts_with = "t")]
    pub t_range: Option<String>,
    /// Tail tolerance of the truncated Poisson sum.
    #[arg(long, default_value_t = 1e-8)]
    pub eps: f64,
    /// Volume exponent of the T-functional column.
    #[arg(long)]
    pub b: Option<f64>,
    #[command(flatten)]
    pub faces: Faces,
    #[command(flatten)]
    pub common: Common,
}
