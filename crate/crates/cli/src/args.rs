use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "ccnet",
    version,
    about = "Transaction-network analytics for community-currency ledgers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a ledger and write per-year flow summaries
    Ingest(Ingest),
    /// Reciprocity, cycle census, clustering and triads
    Metrics(Metrics),
    /// Strongly connected components and bow-tie structure
    Bowtie(Bowtie),
    /// Degree-preserving null-model comparison
    Nullmodel(Nullmodel),
    /// Business/person layer decomposition
    Multilayer(Multilayer),
    /// Postal-zone and sector origin/destination matrices
    Geo(Geo),
    /// Generate a synthetic ledger
    Synth(Synth),
    /// Run every analysis for each selected year
    Report(Report),
}

#[derive(Debug, Args)]
pub struct Input {
    /// Transactions CSV
    #[arg(long, value_name = "PATH")]
    pub tx: PathBuf,
    /// Users CSV; without it every user has unknown type
    #[arg(long, value_name = "PATH")]
    pub users: Option<PathBuf>,
    /// Years to analyze, comma separated; all years present by default
    #[arg(long, value_name = "Y[,Y...]", value_delimiter = ',')]
    pub year: Vec<i32>,
    /// Keep users from the user file that have no transaction in the period
    #[arg(long)]
    pub include_isolated: bool,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Worker threads; 0 picks one per core
    #[arg(long, env = "CCNET_THREADS", default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct CycleFlags {
    /// Longest cycle length to enumerate (2 to 5)
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u8).range(2..=5))]
    pub cycles_max_len: u8,
    /// Stop the cycle census after this many cycles
    #[arg(long, default_value_t = ccnet::metrics::DEFAULT_CYCLE_CAP)]
    pub cycle_cap: u64,
}

#[derive(Debug, Args)]
pub struct NullFlags {
    /// Number of rewired graphs
    #[arg(long, default_value_t = 50)]
    pub runs: u32,
    /// Attempted swaps per arc
    #[arg(long, default_value_t = 10)]
    pub swap_mult: u32,
    /// Base seed; run k uses seed XOR k
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct Ingest {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Metrics {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub cycles: CycleFlags,
}

#[derive(Debug, Args)]
pub struct Bowtie {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub common: Common,
    /// Drop every transaction involving a provider
    #[arg(long)]
    pub filter_providers: bool,
    /// Number of SCC sizes listed in scc_summary.csv
    #[arg(long, default_value_t = 5)]
    pub top_k: usize,
}

#[derive(Debug, Args)]
pub struct Nullmodel {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub null: NullFlags,
    /// Drop every transaction involving a provider
    #[arg(long)]
    pub filter_providers: bool,
}

#[derive(Debug, Args)]
pub struct Multilayer {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Geo {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SellerChoiceArg {
    Capped,
    Global,
}

#[derive(Debug, Args)]
pub struct Synth {
    #[command(flatten)]
    pub common: Common,
    /// JSON generator config; flags override its fields
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Generator seed [default: 42]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of users [default: 2000]
    #[arg(long)]
    pub n_users: Option<u32>,
    /// Number of transactions [default: 40000]
    #[arg(long)]
    pub n_tx: Option<u64>,
    /// Imitation strength
    #[arg(long)]
    pub beta: Option<f64>,
    /// Pareto shape of user activity
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Years the transaction dates are spread over [default: 2022]
    #[arg(long, value_delimiter = ',')]
    pub years: Vec<i32>,
    /// Seller weighting rule [default: capped]
    #[arg(long, value_enum)]
    pub seller_choice: Option<SellerChoiceArg>,
}

#[derive(Debug, Args)]
pub struct Report {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub cycles: CycleFlags,
    #[command(flatten)]
    pub null: NullFlags,
}
