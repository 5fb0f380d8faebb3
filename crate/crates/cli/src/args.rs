use std::net::IpAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use wordgraph::dynamics::{Scheme, Weighting};
use wordgraph::report::Format;
use wordgraph::text::ExtractionMode;

#[derive(Debug, Parser)]
#[command(name = "wordgraph", version, about = "Semantic measures over the WordNet noun taxonomy")]
pub struct Cli {
    /// WordNet dictionary directory (holds data.noun, index.noun, noun.exc).
    #[arg(long, global = true, env = "WORDGRAPH_DB", default_value = "data/wordnet-3.1")]
    pub db: PathBuf,
    /// Binary cache; read when present, written after parsing otherwise.
    #[arg(long, global = true, env = "WORDGRAPH_CACHE")]
    pub cache: Option<PathBuf>,
    /// Fail when the database constants differ from the WordNet 3.1 reference.
    #[arg(long, global = true)]
    pub strict: bool,
    #[arg(long, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for every sampling step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// More logging (-v info, -vv debug); RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Database checks and cache building.
    Db {
        #[command(subcommand)]
        command: DbCommand,
    },
    /// List the 49 measures.
    Measures,
    /// Similarity of two words.
    Sim {
        x: String,
        y: String,
        /// Comma-separated ids; `similarity` for all 40.
        #[arg(long, default_value = "similarity")]
        measures: String,
    },
    /// Information content (and other single-word measures) of a word.
    Ic {
        word: String,
        /// Comma-separated ids; defaults to every single-word measure.
        #[arg(long)]
        measures: Option<String>,
    },
    /// Graph functions of a word: polysemy, depth, subsumers, leaves...
    WordStats { word: String },
    /// Semantic-similarity dynamics of conversations.
    Analyze(AnalyzeArgs),
    /// Rank candidate words by how far they pull a base set's similarity down.
    Suggest(SuggestArgs),
    /// Correlate measures over a random sample and cluster them.
    Correlate(CorrelateArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Subcommand)]
pub enum DbCommand {
    /// Load the database and compare its constants with the reference.
    Verify,
    /// Parse the database and write a binary cache.
    Cache {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Transcripts (dictionary mode) or `token<TAB>tag` files (pretagged).
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// JSON run configuration; explicit flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSON file with subjects, roles, idea spans and markers.
    #[arg(long)]
    pub grouping: Option<PathBuf>,
    #[arg(long)]
    pub scheme: Option<Scheme>,
    /// Time points per unit (default 3; 6 for marker schemes).
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub measures: Option<String>,
    #[arg(long)]
    pub mode: Option<ExtractionMode>,
    #[arg(long)]
    pub weighting: Option<Weighting>,
    /// Slopes within ±epsilon count as constant.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Join adjacent tokens into multi-word lexicon entries.
    #[arg(long)]
    pub collocations: bool,
    /// Also write report.json and report.csv here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuggestArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub base: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub candidates: Vec<String>,
    /// Similarity measure id (default lin:sanchez-batet).
    #[arg(long)]
    pub measure: Option<String>,
    /// Number of proposals to show.
    #[arg(short, long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    /// Similarity ids (pairs are sampled) or single-word ids (words are sampled).
    #[arg(long, default_value = "similarity")]
    pub measures: String,
    #[arg(long, default_value_t = 500)]
    pub sample: usize,
    /// Also write matrix.csv, dendrogram.json and dendrogram.txt here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: IpAddr,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Directory for session event logs; sessions survive restarts.
    #[arg(long)]
    pub persist: Option<PathBuf>,
    /// Allowed CORS origin (any when unset).
    #[arg(long)]
    pub cors_origin: Option<String>,
}
