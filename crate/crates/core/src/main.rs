use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cde_core::cli::{self, parse_range, CliError};
use cde_core::feasibility::Mode;
use cde_core::harness::TrialConfig;

/// Minimum sum-rates and lower bounds for cooperative data exchange.
#[derive(Debug, Parser)]
#[command(name = "cde", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Ps,
    Nps,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Ps => Mode::Ps,
            ModeArg::Nps => Mode::Nps,
        }
    }
}

#[derive(Debug, Args)]
struct InstanceArg {
    /// Instance file (JSON, 0-based packet indices).
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact minimum sum-rate with a maximizing partition.
    Exact {
        #[command(flatten)]
        instance: InstanceArg,
        #[arg(long, value_enum, default_value = "nps")]
        mode: ModeArg,
    },
    /// Lower bounds, and the exact value when enumeration is affordable.
    Bounds {
        #[command(flatten)]
        instance: InstanceArg,
        /// Dump every greedy chain step.
        #[arg(long)]
        trace: bool,
    },
    /// Whether some strategy with the given sum-rate achieves recovery.
    Feasible {
        #[command(flatten)]
        instance: InstanceArg,
        /// Integer or `p/q`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, value_enum, default_value = "nps")]
        mode: ModeArg,
    },
    /// All integer strategies with the given sum-rate, one per line.
    Strategies {
        #[command(flatten)]
        instance: InstanceArg,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Monte-Carlo bound tightness over a (K, L) grid, written as CSV.
    Experiment {
        /// Client counts, `A..B` inclusive.
        #[arg(long, value_parser = parse_range, default_value = "3..8")]
        k: std::ops::RangeInclusive<usize>,
        /// Packet counts, `A..B` inclusive.
        #[arg(long, value_parser = parse_range, default_value = "6..30")]
        l: std::ops::RangeInclusive<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Exact { instance, mode } => {
            cli::cmd_exact(&instance.instance, mode.into(), &mut stdout)
        }
        Command::Bounds { instance, trace } => {
            cli::cmd_bounds(&instance.instance, trace, &mut stdout)
        }
        Command::Feasible {
            instance,
            alpha,
            mode,
        } => cli::cmd_feasible(&instance.instance, &alpha, mode.into(), &mut stdout),
        Command::Strategies { instance, alpha } => {
            cli::cmd_strategies(&instance.instance, &alpha, &mut stdout)
        }
        Command::Experiment {
            k,
            l,
            trials,
            seed,
            out,
            threads,
        } => {
            let cfg = TrialConfig {
                k_values: k.collect(),
                l_values: l.collect(),
                trials,
                master_seed: seed,
                threads,
                ..TrialConfig::default()
            };
            cli::cmd_experiment(&cfg, &out, &mut stdout, &mut io::stderr())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
