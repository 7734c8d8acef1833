mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qoinc::inclusion::Algorithm;

/// Quasiorder-based inclusion checks, compressed-text search and residual automata.
#[derive(Parser, Debug)]
#[command(name = "tool", version)]
pub struct Cli {
    /// Emit one JSON object instead of human-readable text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Report iteration counts and operation counters.
    #[arg(long, global = true)]
    pub stats: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Language inclusion between automata, grammars and counter nets.
    Include {
        #[command(subcommand)]
        kind: IncludeKind,
    },
    /// Count (or list) the lines of compressed texts matching a pattern.
    Search {
        /// Regular expression to look for inside each line.
        #[arg(short = 'e', long = "regexp")]
        pattern: String,
        /// Print the matching lines after the count.
        #[arg(long)]
        report: bool,
        /// SLP files, binary or text layout.
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Build an SLP for a file with RePair.
    Compress {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Write the text layout instead of the binary one.
        #[arg(long)]
        text: bool,
    },
    /// Expand an SLP back to bytes.
    Decompress {
        input: PathBuf,
        /// Destination file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Refuse to expand past this many bytes.
        #[arg(long, default_value_t = 1 << 30)]
        cap: u64,
    },
    /// Residual automaton of an NFA.
    Residualize {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Res)]
        method: Method,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
    },
    /// Canonical RFA of the language of an NFA.
    Canonical {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
    },
    /// Residualize the reverse, reverse back and residualize again.
    DoubleReversal { input: PathBuf },
    /// Decide whether every left language is closed under the right Nerode quasiorder.
    CheckDr { input: PathBuf },
    /// Learn the canonical RFA of the language of an NFA through queries only.
    Learn { target: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum IncludeKind {
    /// `L(left) ⊆ L(right)` for two NFAs.
    Nfa {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value = "antichain-fwd", value_parser = parse_algorithm)]
        algo: Algorithm,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// `L(grammar) ⊆ L(right)` for a CNF grammar and an NFA.
    Cfg {
        grammar: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = CfgAlgorithm::Antichain)]
        algo: CfgAlgorithm,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Every word of an NFA is a trace of a one-counter net.
    Ocn {
        left: PathBuf,
        net: PathBuf,
        #[arg(long, default_value_t = 0)]
        start_state: usize,
        #[arg(long, default_value_t = 0)]
        start_counter: u64,
        #[command(flatten)]
        check: CheckArgs,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct CheckArgs {
    /// Exit with status 1 when the inclusion does not hold.
    #[arg(long)]
    pub fail_on_miss: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfgAlgorithm {
    Antichain,
    WordMyhill,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Prime principals of the state-set quasiorder.
    Res,
    /// Non-coverable reachable subsets.
    Denis,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideArg {
    Right,
    Left,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    Algorithm::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
        format!("unknown algorithm {s:?}; expected one of {}", names.join(", "))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("tool: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
