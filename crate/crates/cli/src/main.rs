mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sample_mst::ingest::{ZeroPolicy, DEFAULT_THRESHOLD};

#[derive(Parser)]
#[command(name = "sample-mst", version, about = "How well does a sample's MST predict the population MST?")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the replication pipeline described by a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        /// Overrides the config's output directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Minimum spanning forest of a preprocessed edgelist.
    Mst {
        input: PathBuf,
        /// Tie-breaking ordering seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        prep: Prep,
        /// Write msf.csv and msf_stats.json here instead of stdout/stderr.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Draw one sample and print it with its PPV as JSON.
    Sample(SampleArgs),
    /// Preprocess an edgelist and write the graph, ordering and report.
    Ingest {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        prep: Prep,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Randomized checks of the MST theorems.
    Theorems {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per theorem.
        #[arg(long, default_value_t = 300)]
        instances: usize,
        /// Node cap for enumeration checks.
        #[arg(long, default_value_t = 8)]
        max_nodes: usize,
        /// Node cap for sampled-graph checks.
        #[arg(long, default_value_t = 40)]
        max_sample_nodes: usize,
        /// Corrupt every MSF by one edge; the checks should fail.
        #[arg(long)]
        mutate: bool,
    },
    /// Summarise an existing replications.csv.
    Report {
        replications: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct Prep {
    /// Distance threshold as a fraction.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD, conflicts_with = "threshold_pct")]
    threshold: f64,
    /// Distance threshold in percent (1.5 means 0.015).
    #[arg(long)]
    threshold_pct: Option<f64>,
    #[arg(long, value_enum, default_value_t = ZeroArg::AfterFilter)]
    zero_policy: ZeroArg,
}

impl Prep {
    fn threshold(&self) -> f64 {
        self.threshold_pct.map_or(self.threshold, |p| p / 100.0)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ZeroArg {
    #[value(alias = "after_filter")]
    AfterFilter,
    #[value(alias = "before_filter")]
    BeforeFilter,
}

impl From<ZeroArg> for ZeroPolicy {
    fn from(z: ZeroArg) -> Self {
        match z {
            ZeroArg::AfterFilter => ZeroPolicy::AfterFilter,
            ZeroArg::BeforeFilter => ZeroPolicy::BeforeFilter,
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    /// Edgelist to sample from; otherwise a graph is generated.
    #[arg(long, conflicts_with_all = ["kind", "nodes"])]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 3)]
    m_attach: usize,
    #[arg(long, value_enum)]
    design: DesignArg,
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Comma-separated quadrant list, e.g. I,II.
    #[arg(long, value_delimiter = ',')]
    quadrants: Vec<String>,
    #[arg(long, value_enum, default_value_t = ScoreArg::Strength)]
    neighbor_score: ScoreArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    prep: Prep,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Complete,
    Gnp,
    Normal,
    #[value(alias = "barabasi_albert")]
    BarabasiAlbert,
}

#[derive(Clone, Copy, ValueEnum)]
enum DesignArg {
    Uniform,
    Near,
    Far,
    #[value(alias = "random_walk")]
    RandomWalk,
    Quadrant,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoreArg {
    Strength,
    #[value(alias = "edge_weight")]
    EdgeWeight,
}

/// Exit status classes: bad input is 2, anything failing after that is 1.
pub enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

pub type CmdResult = Result<(), Failure>;

pub fn usage<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Usage(e.into())
}

pub fn runtime<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Runtime(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate { config, seed, workers, out_dir } => commands::simulate(&config, seed, workers, out_dir),
        Command::Mst { input, seed, prep, out_dir } => {
            commands::mst(&input, seed, prep.threshold(), prep.zero_policy.into(), out_dir.as_deref())
        }
        Command::Sample(args) => commands::sample(args),
        Command::Ingest { input, seed, prep, out_dir } => {
            commands::ingest(&input, seed, prep.threshold(), prep.zero_policy.into(), &out_dir)
        }
        Command::Theorems { seed, instances, max_nodes, max_sample_nodes, mutate } => {
            commands::theorems(sample_mst::theorems::TheoremConfig { seed, instances, max_nodes, max_sample_nodes, mutate })
        }
        Command::Report { replications, out_dir } => commands::report(&replications, out_dir.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
