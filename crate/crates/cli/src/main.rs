//! `lexforge`: build definition corpora, look up and generate definitions,
//! evaluate generations and serve the drafting API.

mod commands;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "lexforge", version, about = "Drafting support for Definitions articles of legal acts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert act files (canonical .json or EUR-Lex .html) into a corpus.
    Ingest {
        /// Files or directories; .html files take their Celex id from the file name.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Download acts from EUR-Lex by Celex id.
    Fetch {
        /// Celex ids; more may be listed one per line in --list.
        celex: Vec<String>,
        #[arg(long)]
        list: Option<PathBuf>,
        /// Crawl the legislation-in-force listing of this directory code
        /// (12 is Energy).
        #[arg(long)]
        in_force: Option<String>,
        #[arg(long, default_value_t = 200)]
        max_pages: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also keep the downloaded pages in this directory.
        #[arg(long)]
        raw: Option<PathBuf>,
    },
    /// Extract definition elements from the Definitions articles of a corpus.
    Extract {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Resolve citations of dynamic definitions.
    Resolve {
        #[arg(long)]
        defs: PathBuf,
        /// Corpus used to check cited articles that define nothing.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Write the resolution report (dangling references) here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Look up existing definitions of a term, ranked for a draft.
    Lookup {
        #[arg(long)]
        defs: PathBuf,
        #[arg(long)]
        term: String,
        /// Comma-separated eurovoc descriptors of the draft.
        #[arg(long, value_delimiter = ',')]
        descriptors: Vec<String>,
        /// Corpus providing descriptors and years of the source acts.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Cite an existing definition element.
    Cite {
        #[arg(long)]
        defs: PathBuf,
        /// Element id, as printed by `lookup`.
        #[arg(long)]
        id: String,
        /// Term to define; defaults to the element's term.
        #[arg(long)]
        term: Option<String>,
    },
    /// Retrieve the draft fragments with the most occurrences of a term.
    Retrieve {
        #[arg(long)]
        draft: PathBuf,
        #[arg(long)]
        term: String,
        #[arg(short, default_value_t = lexforge_core::retrieval::DEFAULT_K)]
        k: usize,
    },
    /// Generate a definition from the draft's own text.
    Define {
        #[arg(long)]
        draft: PathBuf,
        #[arg(long)]
        term: String,
        #[arg(short, default_value_t = lexforge_core::retrieval::DEFAULT_K)]
        k: usize,
        /// Decoding parameters (TOML).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Use the built-in deterministic generator instead of the endpoint.
        #[arg(long)]
        mock: bool,
        /// Print the prompt and exit.
        #[arg(long)]
        prompt_only: bool,
    },
    /// BLEU-1..4 of generated against reference definitions.
    Eval {
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Corpus and definition statistics.
    Stats {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        defs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Definition length histogram as CSV.
        #[arg(long)]
        histogram: Option<PathBuf>,
        /// Crawled acts skipped for having no HTML rendition.
        #[arg(long, default_value_t = 0)]
        non_html: usize,
    },
    /// Serve the drafting API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        defs: PathBuf,
        #[arg(long, env = lexforge_service::DATA_DIR_ENV, default_value = "lexforge-data")]
        data_dir: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        mock_generator: bool,
        /// Sequential session ids and a logical clock.
        #[arg(long)]
        deterministic: bool,
    },
}

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    commands::run(cli.command)
}
