use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kge_core::analysis::ZipfLaw;
use kge_core::sketch::{FrequencyMethod, SketchConfig, DEFAULT_HASHES, DEFAULT_K, DEFAULT_SEED, DEFAULT_WIDTH};
use kge_core::EncodeConfig;

pub const DEFAULT_PARTITIONS: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "kge", version, about = "Frequency- and locality-aware dictionary encoding for RDF")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a dictionary and encode an N-Triples file.
    Encode(EncodeArgs),
    /// Turn a dictionary and encoded triples back into N-Triples.
    Decode(DecodeArgs),
    /// Show the most frequent terms found by a frequency method.
    Topk(TopkArgs),
    /// Run the CM+MG pass alone and save the merged sketch.
    Count(CountArgs),
    /// Print the class taxonomy extracted from a file.
    Taxonomy(TaxonomyArgs),
    /// Generate a synthetic knowledge graph.
    Gen(GenArgs),
    /// Compare the encoder with order-, hash- and sort-based baselines.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Cmmg,
    Countmin,
    Misragries,
    Sample,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawArg {
    Geometric,
    Power,
}

impl From<LawArg> for ZipfLaw {
    fn from(l: LawArg) -> Self {
        match l {
            LawArg::Geometric => ZipfLaw::Geometric,
            LawArg::Power => ZipfLaw::PowerLaw,
        }
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// N-Triples input, optionally gzip-compressed; `-` reads stdin.
    #[arg(long)]
    pub input: PathBuf,
    /// Skip malformed lines instead of aborting.
    #[arg(long)]
    pub skip_bad_lines: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SketchArgs {
    /// Number of frequent terms.
    #[arg(long, default_value_t = DEFAULT_K)]
    pub k: usize,
    /// Count-Min hash functions.
    #[arg(long, default_value_t = DEFAULT_HASHES)]
    pub hashes: usize,
    /// Counters per Count-Min row.
    #[arg(long, default_value_t = DEFAULT_WIDTH)]
    pub width: usize,
    /// Worker threads [default: available cores].
    #[arg(long)]
    pub workers: Option<usize>,
    /// Input partitions; results depend on this but not on --workers.
    #[arg(long, default_value_t = DEFAULT_PARTITIONS)]
    pub partitions: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Cmmg)]
    pub freq_method: MethodArg,
    /// Sampling rate for `--freq-method sample`.
    #[arg(long, default_value_t = 0.05)]
    pub sample_rate: f64,
}

impl SketchArgs {
    pub fn method(&self) -> FrequencyMethod {
        match self.freq_method {
            MethodArg::Cmmg => FrequencyMethod::Cmmg,
            MethodArg::Countmin => FrequencyMethod::CountMin,
            MethodArg::Misragries => FrequencyMethod::MisraGries,
            MethodArg::Sample => FrequencyMethod::Sample { rate: self.sample_rate },
            MethodArg::Exact => FrequencyMethod::Exact,
        }
    }

    pub fn sketch(&self) -> SketchConfig {
        SketchConfig {
            k: self.k,
            hashes: self.hashes,
            width: self.width,
            seed: self.seed,
        }
    }

    pub fn workers(&self) -> usize {
        self.workers.unwrap_or_else(default_workers)
    }

    pub fn encode_config(&self) -> EncodeConfig {
        EncodeConfig {
            sketch: self.sketch(),
            workers: self.workers(),
            partitions: self.partitions,
            method: self.method(),
        }
    }
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub sketch: SketchArgs,
    /// Dictionary output (text).
    #[arg(long)]
    pub out_dict: PathBuf,
    /// Encoded triples output.
    #[arg(long)]
    pub out_data: PathBuf,
    /// Also write the dictionary in binary form.
    #[arg(long)]
    pub out_dict_bin: Option<PathBuf>,
    /// Write statistics here instead of stdout.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Take frequent terms from a sketch saved by `kge count`.
    #[arg(long = "sketch")]
    pub sketch_file: Option<PathBuf>,
    /// Write the class taxonomy here.
    #[arg(long)]
    pub out_taxonomy: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// Dictionary, text or binary.
    #[arg(long)]
    pub dict: PathBuf,
    /// Encoded triples.
    #[arg(long)]
    pub data: PathBuf,
    /// N-Triples output [default: stdout].
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TopkArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub sketch: SketchArgs,
    /// Add a column with exact counts.
    #[arg(long)]
    pub with_exact: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub sketch: SketchArgs,
    /// Sketch output.
    #[arg(long)]
    pub out_sketch: PathBuf,
}

#[derive(Debug, Args)]
pub struct TaxonomyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Distinct subject/object terms in the pool.
    #[arg(long, default_value_t = 10_000)]
    pub n_distinct: usize,
    /// Skew parameter of the frequency law.
    #[arg(long, default_value_t = 2.0)]
    pub skew: f64,
    /// Target number of term occurrences (three per triple).
    #[arg(long, default_value_t = 300_000)]
    pub occurrences: u64,
    #[arg(long, default_value_t = 20)]
    pub classes: usize,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 10)]
    pub predicates: usize,
    #[arg(long, value_enum, default_value_t = LawArg::Geometric)]
    pub law: LawArg,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// N-Triples output [default: stdout].
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub sketch: SketchArgs,
    /// Join predicates for the locality column, as two IRIs separated by a
    /// comma [default: the pair sharing the most subjects].
    #[arg(long)]
    pub join: Option<String>,
    /// CSV output [default: stdout].
    #[arg(long)]
    pub output: Option<PathBuf>,
}
