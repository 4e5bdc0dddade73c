//! Command-line interface of the `zo-bench` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::ConfigOverlay;

#[derive(Debug, Parser)]
#[command(
    name = "zo-bench",
    version,
    about = "Benchmark gradient-free optimizers on synthetic functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a multi-seed experiment and write per-run trace CSVs plus a summary
    Run(RunArgs),
    /// Render a log-scale convergence plot (SVG) from a trace directory
    Plot(PlotArgs),
    /// Run one experiment per beta1 value and tabulate final median gaps
    SweepBeta1(SweepBeta1Args),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Flat key=value config file; command-line flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Benchmark function: quadratic | cubic | levy | rosenbrock
    #[arg(long)]
    pub function: Option<String>,

    /// Optimizer to run (repeatable): zo-sgd | zo-signsgd | zo-rmsprop | zo-adamm | r-adazo
    #[arg(long = "optimizer")]
    pub optimizer: Vec<String>,

    /// Problem dimension d
    #[arg(long)]
    pub dim: Option<usize>,

    /// Iteration count T
    #[arg(long)]
    pub iters: Option<u64>,

    /// Seed (repeatable); each seed is an independent run
    #[arg(long = "seed")]
    pub seed: Vec<u64>,

    /// First-moment decay rate
    #[arg(long)]
    pub beta1: Option<f64>,

    /// Second-moment decay rate
    #[arg(long)]
    pub beta2: Option<f64>,

    /// Learning rate
    #[arg(long)]
    pub lr: Option<f64>,

    /// Smoothing radius of the gradient estimator
    #[arg(long)]
    pub mu: Option<f64>,

    /// Number of probe directions per estimate
    #[arg(long)]
    pub k: Option<usize>,

    /// Stability constant inside the adaptive square root
    #[arg(long)]
    pub zeta: Option<f64>,

    /// Observation-noise standard deviation (0 disables noise)
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Fill value for the initial point (default: per-function)
    #[arg(long)]
    pub theta0: Option<f64>,

    /// Fill value for the initial second moment (default: 0)
    #[arg(long)]
    pub v0: Option<f64>,

    /// Record per-iteration moment diagnostics (extra CSV columns)
    #[arg(long)]
    pub diagnostics: bool,

    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    pub fn overlay(&self) -> ConfigOverlay {
        ConfigOverlay {
            function: self.function.clone(),
            optimizers: self.optimizer.clone(),
            dim: self.dim,
            iters: self.iters,
            seeds: self.seed.clone(),
            beta1: self.beta1,
            beta2: self.beta2,
            lr: self.lr,
            mu: self.mu,
            k: self.k,
            zeta: self.zeta,
            sigma: self.sigma,
            theta0: self.theta0,
            v0: self.v0,
            diagnostics: self.diagnostics.then_some(true),
            out: self.out.clone(),
        }
    }
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Directory containing trace CSVs from a previous run
    #[arg(long = "in")]
    pub input: PathBuf,

    /// Output SVG path
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepBeta1Args {
    /// Comma-separated beta1 values, e.g. 0.1,0.5,0.9
    #[arg(long, value_delimiter = ',')]
    pub values: Vec<f64>,

    #[command(flatten)]
    pub run: RunArgs,
}
