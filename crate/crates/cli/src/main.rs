mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Evaluate, search and simulate Z_M-linear QAM index codes.
#[derive(Parser, Debug)]
#[command(name = "qamidx", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-subset distances and gains, and the side-information gain.
    Eval(EvalArgs),
    /// Exhaustive search over circulant encoding matrices.
    Search(SearchArgs),
    /// Monte-Carlo message-error rates of one or more receivers.
    Simulate(SimulateArgs),
    /// Encode a message tuple or decode a received point.
    Codec {
        #[command(subcommand)]
        op: CodecOp,
    },
    /// Smallest SNR allowed by capacity for a receiver.
    Capacity(CapacityArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CodeArgs {
    /// Modulus M.
    #[arg(short = 'M', long = "modulus")]
    pub m: Option<i64>,
    /// Number of messages K.
    #[arg(short = 'K', long = "messages")]
    pub k: Option<usize>,
    /// First row of a circulant encoding matrix, comma separated.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "matrix")]
    pub row: Option<String>,
    /// Full encoding matrix, rows separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Evaluate every subset even for circulant codes.
    #[arg(long)]
    pub all_subsets: bool,
    #[arg(long)]
    pub json: bool,
    /// Read the code from JSON written by `eval --json` or a code record.
    #[arg(long, value_name = "FILE")]
    pub json_in: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(short = 'M', long = "modulus")]
    pub m: Option<i64>,
    #[arg(short = 'K', long = "messages")]
    pub k: Option<usize>,
    /// Try every first entry instead of one per unit-scaling orbit.
    #[arg(long)]
    pub all_first_entries: bool,
    /// Report every best code instead of the first one.
    #[arg(long)]
    pub all_ties: bool,
    /// Most codes listed with --all-ties.
    #[arg(long, default_value_t = 1000)]
    pub tie_cap: usize,
    /// Evaluate every subset of every candidate.
    #[arg(long)]
    pub no_prune: bool,
    /// Search all K x K matrices rather than circulant ones (tiny sizes only).
    #[arg(long)]
    pub general: bool,
    /// Candidates examined in this run.
    #[arg(long, default_value_t = qamidx::search::DEFAULT_CANDIDATE_BUDGET)]
    pub max_candidates: u64,
    #[arg(long, env = "QAMIDX_THREADS")]
    pub threads: Option<usize>,
    /// Write progress here if the run stops at the candidate budget.
    #[arg(long, value_name = "FILE")]
    pub checkpoint: Option<PathBuf>,
    /// Continue from a checkpoint file.
    #[arg(long, value_name = "FILE")]
    pub resume: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    /// Re-run the search described by JSON written by `search --json`.
    #[arg(long, value_name = "FILE")]
    pub json_in: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Side-information set, e.g. "" or "1,3". Repeat for several receivers.
    #[arg(long = "subset", allow_hyphen_values = true)]
    pub subsets: Vec<String>,
    /// SNR points in dB, comma separated, or a range START:STOP:STEP.
    #[arg(long, allow_hyphen_values = true)]
    pub snr: Option<String>,
    /// Trials per SNR point (an upper bound when early stopping is on).
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Stop a point after this many errors; 0 disables early stopping.
    #[arg(long, default_value_t = qamidx::awgnsim::DEFAULT_MAX_ERRORS)]
    pub max_errors: u64,
    #[arg(long, default_value_t = qamidx::awgnsim::DEFAULT_BATCH_SIZE)]
    pub batch_size: u64,
    /// Required: the RNG seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Interpret SNR as Es/sigma^2 per dimension.
    #[arg(long)]
    pub es_n0: bool,
    #[arg(long, env = "QAMIDX_THREADS")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub json: bool,
    /// Re-run the simulation described by JSON written by `simulate --json`.
    #[arg(long, value_name = "FILE")]
    pub json_in: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum CodecOp {
    /// x = w C mod M.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Message tuple, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        message: Option<String>,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "FILE")]
        json_in: Option<PathBuf>,
    },
    /// ML decoding of a received point (offset already removed).
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        /// Received point, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        /// Known messages, e.g. "1" or "1,3".
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        subset: String,
        /// Values of the known messages, in increasing message order.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        side: String,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "FILE")]
        json_in: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct CapacityArgs {
    #[arg(short = 'K', long = "messages")]
    pub k: Option<usize>,
    /// Message rates in b/dim, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub rates: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    pub subset: String,
    #[arg(long)]
    pub json: bool,
    #[arg(long, value_name = "FILE")]
    pub json_in: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(commands::EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let out = match cli.cmd {
        Command::Eval(a) => commands::eval(a),
        Command::Search(a) => commands::search(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Codec { op } => commands::codec(op),
        Command::Capacity(a) => commands::capacity(a),
    };
    match out {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
