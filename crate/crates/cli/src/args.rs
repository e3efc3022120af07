use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sgrid_core::{EstimatorKind, MinerConfig};

#[derive(Debug, Parser)]
#[command(name = "sgrid", version, about = "Mine the subspaces in which records are outlying")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank the subspaces in which each query record is most outlying.
    Mine(MineArgs),
    /// Generate a synthetic dataset with planted outlying subspaces.
    Synth(SynthArgs),
    /// Mine every ground-truth record and score the results.
    Eval(EvalArgs),
    /// Time mining runs across estimators.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Estimator {
    Sgrid,
    Grid,
    Kde,
}

impl From<Estimator> for EstimatorKind {
    fn from(e: Estimator) -> Self {
        match e {
            Estimator::Sgrid => EstimatorKind::Sgrid,
            Estimator::Grid => EstimatorKind::Grid,
            Estimator::Kde => EstimatorKind::Kde,
        }
    }
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Numeric CSV file, one record per row.
    #[arg(long)]
    pub data: PathBuf,
    /// Treat the first CSV row as attribute names.
    #[arg(long)]
    pub header: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_enum, default_value = "sgrid")]
    pub estimator: Estimator,
    /// Largest subspace size explored.
    #[arg(long, default_value_t = 5)]
    pub depth: usize,
    #[arg(long, default_value_t = 100)]
    pub beam_width: usize,
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
    /// Only report subspaces with a Z-score below this value.
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Bit-set block width for the grid estimators (8, 16, 32, 64 or 128).
    #[arg(long, default_value_t = 64)]
    pub block_size: usize,
    /// Recompute subspace statistics for every query.
    #[arg(long)]
    pub no_cache: bool,
    /// Worker threads for multi-query runs.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

impl SearchArgs {
    pub fn config(&self) -> MinerConfig {
        MinerConfig {
            max_depth: self.depth,
            beam_width: self.beam_width,
            top_k: self.top_k,
            estimator: self.estimator.into(),
            tau: self.tau,
            block_size: self.block_size,
            use_cache: !self.no_cache,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Leave wall-clock timings out of the report.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct MineArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Zero-based record ids, comma separated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub query: Vec<usize>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub dims: usize,
    #[arg(long)]
    pub size: usize,
    /// Sizes of the correlated attribute groups, comma separated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub groups: Vec<usize>,
    #[arg(long)]
    pub outliers: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Writes `<prefix>.csv` and `<prefix>.truth`.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Ground-truth file written by `synth`.
    #[arg(long)]
    pub truth: PathBuf,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "sgrid,grid,kde")]
    pub estimators: Vec<Estimator>,
    /// Number of query records, spread evenly over the data.
    #[arg(long, default_value_t = 10)]
    pub queries: usize,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 100)]
    pub beam_width: usize,
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
    #[arg(long, default_value_t = 64)]
    pub block_size: usize,
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    /// Write the CSV rows here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
