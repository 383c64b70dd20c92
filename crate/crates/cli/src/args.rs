use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "gdpm", version, about = "Closure structure of binary datasets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the closure levels and optionally write a report.
    Mine(MineCmd),
    /// Mine, then compute frequency, coverage, F1 and level-summary tables.
    Analyze(AnalyzeCmd),
    /// Print the implications passkey => closure \ passkey, by lift.
    Rules(RulesCmd),
    /// Print dataset size, density, closure index and size bounds.
    Stats(StatsCmd),
    /// Run another subcommand on a subset of the objects.
    Sample(SampleCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Transactions,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AttributeOrder {
    Input,
    FreqDesc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Int,
    Ext,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormatArg {
    Structured,
    Tabular,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Transaction file or CSV table.
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "transactions")]
    pub format: InputFormat,
    /// JSON binarization rules (required for csv).
    #[arg(long)]
    pub binarize_config: Option<PathBuf>,
    /// Attribute names for a transaction file, one per line.
    #[arg(long)]
    pub names: Option<PathBuf>,
    /// CSV column holding class labels; excluded from binarization.
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(long, value_enum, default_value = "input")]
    pub order: AttributeOrder,
}

#[derive(Debug, Args)]
pub struct MiningArgs {
    /// Last closure level to compute.
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long, value_enum, default_value = "int")]
    pub variant: VariantArg,
    /// Compute candidate closures in parallel.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Report path: a JSON file, or a directory for the tabular format.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "structured")]
    pub report_format: ReportFormatArg,
    /// Omit extents of itemsets with larger support from the report.
    #[arg(long)]
    pub elide_extents_above: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MineCmd {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub mining: MiningArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AnalyzeCmd {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub mining: MiningArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Relative-frequency bin edges, from 0 to 1.
    #[arg(long, value_delimiter = ',', default_value = "0,0.2,0.4,0.6,0.8,1")]
    pub bins: Vec<f64>,
    /// Class labels, one per object and line.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RulesCmd {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub mining: MiningArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 1)]
    pub min_support: usize,
    /// Print only the first N rules.
    #[arg(long)]
    pub top: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StatsCmd {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub mining: MiningArgs,
    /// Print the bounds in scientific notation.
    #[arg(long)]
    pub scientific: bool,
}

#[derive(Debug, Args)]
pub struct SampleCmd {
    /// Object ids to keep (0-based, comma separated).
    #[arg(
        long,
        value_delimiter = ',',
        conflicts_with = "fraction",
        required_unless_present = "fraction"
    )]
    pub keep: Option<Vec<u32>>,
    /// Keep this fraction of the objects, chosen uniformly at random.
    #[arg(long)]
    pub fraction: Option<f64>,
    #[arg(long, default_value_t = 0, requires = "fraction")]
    pub seed: u64,
    #[command(subcommand)]
    pub then: SampledCommand,
}

#[derive(Debug, Subcommand)]
pub enum SampledCommand {
    Mine(MineCmd),
    Analyze(AnalyzeCmd),
    Rules(RulesCmd),
    Stats(StatsCmd),
}
