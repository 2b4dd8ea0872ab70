use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use depolar_core::channels::SweepPlacement;
use depolar_core::qml::{NoiseChannel, NoisePlacement};

#[derive(Debug, Parser)]
#[command(
    name = "depolar-sim",
    version,
    about = "Depolarizing-channel experiments on a single qubit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the channel property suite and report measured extremes as JSON.
    Verify(VerifyArgs),
    /// Exact vs first-order expectation differences over gates × p × m.
    Sweep(SweepArgs),
    /// Train the variational classifier over a depth × noise grid.
    Train(TrainArgs),
    /// Multiplication counts and timings of both channels.
    Bench(BenchArgs),
    /// Bloch coordinates of the Iris subset under each encoding.
    EncodeViz(EncodeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlacementArg {
    PerLayer,
    Terminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelArg {
    Modified,
    Standard,
    FirstOrder,
}

impl From<PlacementArg> for NoisePlacement {
    fn from(p: PlacementArg) -> Self {
        match p {
            PlacementArg::PerLayer => NoisePlacement::PerLayer,
            PlacementArg::Terminal => NoisePlacement::Terminal,
        }
    }
}

impl From<PlacementArg> for SweepPlacement {
    fn from(p: PlacementArg) -> Self {
        match p {
            PlacementArg::PerLayer => SweepPlacement::Interleaved,
            PlacementArg::Terminal => SweepPlacement::Terminal,
        }
    }
}

impl From<ChannelArg> for NoiseChannel {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Modified => NoiseChannel::Modified,
            ChannelArg::Standard => NoiseChannel::Standard,
            ChannelArg::FirstOrder => NoiseChannel::FirstOrder,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Random states per property.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Tolerance of the channel-equivalence checks.
    #[arg(long, default_value_t = 1e-14)]
    pub tol: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value = "results/verify")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [3usize, 8, 15])]
    pub gates: Vec<usize>,
    #[arg(long = "p-list", value_delimiter = ',', default_values_t =
        [0.0, 0.001, 0.002, 0.003, 0.004, 0.005, 0.006, 0.007, 0.008, 0.009, 0.01])]
    pub p_list: Vec<f64>,
    #[arg(long = "m-list", value_delimiter = ',', default_values_t = [0usize, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10])]
    pub m_list: Vec<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// `terminal`: circuit then m channels; `per-layer`: m channels after each gate.
    #[arg(long, value_enum, default_value_t = PlacementArg::Terminal)]
    pub noise_placement: PlacementArg,
    #[arg(long, default_value = "results/sweep")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 3, 5, 10, 15])]
    pub depths: Vec<usize>,
    #[arg(long = "p-list", value_delimiter = ',', default_values_t =
        [0.0, 0.001, 0.005, 0.01, 0.05, 0.08, 0.1, 0.5])]
    pub p_list: Vec<f64>,
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..))]
    pub epochs: u64,
    #[arg(long, default_value_t = 0.1)]
    pub lr: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub boundary_resolution: usize,
    /// Training fraction of the stratified split.
    #[arg(long, default_value_t = 0.7)]
    pub split: f64,
    #[arg(long, value_enum, default_value_t = ChannelArg::Modified)]
    pub channel: ChannelArg,
    #[arg(long, value_enum, default_value_t = PlacementArg::PerLayer)]
    pub noise_placement: PlacementArg,
    /// Channel repetitions for terminal or first-order noise (default: depth).
    #[arg(long)]
    pub m: Option<usize>,
    /// Iris CSV; the bundled copy is used when omitted.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value = "results/train")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Timed batches per channel.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub repetitions: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value = "results/bench")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EncodeArgs {
    #[arg(long, value_delimiter = ',', default_values_t =
        ["RYRX".to_string(), "RZRX".to_string(), "RXRY".to_string(), "AMPLITUDE".to_string()])]
    pub schemes: Vec<String>,
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value = "results/encode")]
    pub out_dir: PathBuf,
}

impl std::fmt::Display for PlacementArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PlacementArg::PerLayer => "per-layer",
            PlacementArg::Terminal => "terminal",
        })
    }
}

impl std::fmt::Display for ChannelArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChannelArg::Modified => "modified",
            ChannelArg::Standard => "standard",
            ChannelArg::FirstOrder => "first-order",
        })
    }
}
