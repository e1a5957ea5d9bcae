//! `sklab`: reproducible combinator experiments with machine-readable output.
//!
//! Exit status is 0 on success, 2 when a resource cap cut the work short, 1 on usage or
//! parse errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "sklab", version, about = "S/K combinator experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Step cap for every evolution.
    #[arg(long, global = true)]
    pub max_steps: Option<u64>,
    /// Size cap (leaf count) for every evolution.
    #[arg(long, global = true)]
    pub max_size: Option<u64>,
    /// Node cap for multiway exploration.
    #[arg(long, global = true)]
    pub max_nodes: Option<usize>,
    /// Depth cap for multiway exploration.
    #[arg(long, global = true)]
    pub max_depth: Option<u32>,
    /// Notation of term arguments (default: brackets if `[` appears, else compactLeft).
    #[arg(long, global = true)]
    pub notation: Option<String>,
    /// Output file (default stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for enumerations.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write an experiment manifest (argv, limits, outputs, version) as JSON.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Read a term and write it in another notation.
    Parse {
        term: String,
        #[arg(long, default_value = "brackets")]
        to: String,
    },
    /// Show a term in every notation, with its metrics.
    Print { term: String },
    /// Evolve a term and report the size at every step.
    Evolve {
        term: String,
        #[arg(long, default_value = "lo")]
        strategy: String,
        /// Run on the hash-consed DAG store (leftmost-outermost only) and report a summary.
        #[arg(long)]
        dag: bool,
    },
    /// Evolve every term of one size.
    Census {
        #[arg(long, default_value = "sk")]
        alphabet: String,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value = "lo")]
        strategy: String,
        /// List the presumed-nonterminating terms.
        #[arg(long)]
        classify: bool,
    },
    /// Build the graph of all rewrite paths from a term.
    Multiway { term: String },
    /// Search for a common reduct of two terms.
    Join { a: String, b: String },
    /// Causal graph of an evolution.
    Causal {
        term: String,
        #[arg(long, default_value = "lo")]
        strategy: String,
        /// `share` (both copies of a duplicated argument keep its tokens) or `fresh`.
        #[arg(long, default_value = "share")]
        copies: String,
    },
    /// Branchial graph of one multiway layer, with a ball-growth dimension estimate.
    Branchial {
        term: String,
        #[arg(long)]
        layer: u32,
    },
    /// Size and distinct-subterm count along an evolution.
    DagSeries {
        term: String,
        #[arg(long, default_value = "lo")]
        strategy: String,
    },
    /// Exhaustive search for finite models of the S (and K) axioms.
    Models {
        #[arg(long)]
        k: u8,
        /// Atoms that need values, comma separated.
        #[arg(long, default_value = "s")]
        atoms: String,
        /// Only report how many models exist.
        #[arg(long)]
        count: bool,
    },
    /// Look for two S terms with one normal form but different values in a table.
    Discriminate {
        /// Model file: `s=1` header, then one CSV row per table row.
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "up-to")]
        up_to: usize,
    },
    /// Compile a term with variables into a closed S/K program.
    Compile {
        term: String,
        /// Abstraction order, comma separated (default: order of first appearance).
        #[arg(long)]
        vars: Option<String>,
        #[arg(long, default_value = "optimized")]
        flavor: String,
    },
    /// Church numerals.
    Church {
        #[arg(long, group = "op")]
        encode: Option<u64>,
        #[arg(long, group = "op")]
        decode: Option<String>,
        #[arg(long, group = "op", num_args = 2)]
        add: Option<Vec<u64>>,
        #[arg(long, group = "op", num_args = 2)]
        times: Option<Vec<u64>>,
    },
    /// Check a term against a truth table, or search minimal Boolean forms.
    Boolean {
        term: Option<String>,
        /// Truth table index: bit i is the output on row i of (FF, FT, TF, TT).
        #[arg(long)]
        table: Option<u8>,
        /// Search all terms up to this size for the 16 functions.
        #[arg(long)]
        minimal: Option<usize>,
        /// Use k for true and s[k] for false instead of the reverse.
        #[arg(long)]
        swapped: bool,
    },
    /// All programs p up to a size with p[x] normalizing to the target.
    Programs {
        #[arg(long, default_value = "x[x]")]
        target: String,
        #[arg(long = "up-to")]
        up_to: usize,
    },
    /// Tally the x-only objects computed by programs of one size.
    Objects {
        #[arg(long)]
        size: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(commands::Status::Complete) => ExitCode::SUCCESS,
        Ok(commands::Status::Truncated) => ExitCode::from(2),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}
