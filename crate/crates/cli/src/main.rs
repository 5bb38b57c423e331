//! `nuca`: decide surjectivity, injectivity, number conservation and
//! equicontinuity of non-uniform cellular automata, and draw their orbits.
//!
//! Exit codes: 0 the property holds, 1 it fails, 2 usage or input error,
//! 3 a resource cap was hit.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "nuca", version, about = "Analysis of non-uniform cellular automata")]
struct Cli {
    /// Run every analysis on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rule-file checks.
    #[command(subcommand)]
    Rules(RulesCmd),
    /// DeBruijn and product graph export.
    #[command(subcommand)]
    Graph(GraphCmd),
    #[command(subcommand)]
    Surjectivity(SurjCmd),
    #[command(subcommand)]
    Injectivity(InjCmd),
    #[command(subcommand)]
    Conservation(ConsCmd),
    #[command(subcommand)]
    Dynamics(DynCmd),
    /// Space-time diagram of one orbit.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct RulesArg {
    /// Rule file.
    #[arg(long)]
    rules: PathBuf,
}

#[derive(Args)]
struct DistArgs {
    #[command(flatten)]
    rules: RulesArg,
    /// Distribution literal, e.g. "left=(id) mid=(xor) right=(id) anchor=0".
    #[arg(long)]
    dist: String,
}

#[derive(Subcommand)]
enum RulesCmd {
    /// Parse a rule file and summarize it.
    Validate(RulesArg),
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Csv,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    rules: RulesArg,
    #[arg(long, value_enum, default_value = "dot")]
    format: GraphFormat,
}

#[derive(Subcommand)]
enum GraphCmd {
    Debruijn(GraphArgs),
    Product(GraphArgs),
}

#[derive(Subcommand)]
enum SurjCmd {
    /// Is the partial transition function of a finite pattern onto?
    Pattern {
        #[command(flatten)]
        rules: RulesArg,
        /// Space-separated rule names.
        #[arg(long)]
        pattern: String,
        /// Largest subset-construction DFA allowed.
        #[arg(long, default_value_t = nuca_core::surjectivity::DEFAULT_STATE_CAP)]
        cap: usize,
    },
    /// Is the global map of an eventually periodic distribution onto?
    Dist {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, default_value_t = nuca_core::surjectivity::DEFAULT_STATE_CAP)]
        cap: usize,
    },
}

#[derive(Subcommand)]
enum InjCmd {
    Dist(DistArgs),
}

#[derive(Subcommand)]
enum ConsCmd {
    /// Window verdict for a distribution, optionally cross-checked by
    /// simulating finite configurations.
    Check {
        #[command(flatten)]
        dist: DistArgs,
        /// Also run the charge oracle on supports in [-W, W].
        #[arg(long, value_name = "W")]
        oracle_width: Option<u32>,
        /// Sample this many configurations instead of enumerating all.
        #[arg(long, requires = "oracle_width")]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The subshift of finite type of conserving distributions.
    Sft {
        #[command(flatten)]
        rules: RulesArg,
        /// Write the vertex/edge presentation as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Every forbidden window with an input breaking the identity.
    Forbidden(RulesArg),
}

#[derive(Subcommand)]
enum DynCmd {
    /// Wall search in both tails; linear rules only.
    Classify {
        #[command(flatten)]
        dist: DistArgs,
        /// Longest wall candidate; defaults to max(4 p_L, 4 p_R, 8 r).
        #[arg(long)]
        nmax: Option<usize>,
        /// Also run perturbation probes for this many steps.
        #[arg(long, value_name = "T")]
        empirical: Option<usize>,
        #[arg(long, default_value_t = 8)]
        trials: usize,
        /// Escape distance for the probes; defaults to T / 2.
        #[arg(long)]
        escape: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagramFormat {
    Pgm,
    Csv,
    Text,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    dist: DistArgs,
    /// Configuration literal: zero, single:<a>@<i>, uniform=<a> or the full form.
    #[arg(long)]
    config: String,
    #[arg(long)]
    steps: usize,
    /// Cells shown, as a..b (inclusive).
    #[arg(long, allow_hyphen_values = true)]
    window: String,
    #[arg(long, value_enum, default_value = "text")]
    format: DiagramFormat,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("nuca: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
