//! Command-line experiment harness for output-code ensembles.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 capacity or precondition
//! violations (and 1 for everything else, e.g. I/O).

mod bagging;
mod commands;
mod output;

use clap::{Parser, Subcommand};
use commands::{
    run_bag_plan, run_compare_codes, run_confidence, run_estimate, run_simulate, run_xor_demo,
    CompareOpts, EstimatorOpts, OutputOpts, SimulateOpts, XorDemoOpts,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "parity-codes",
    about = "Simulate coded classifier ensembles and compute estimation confidence bounds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo block error of one code over one channel (CSV/JSON).
    Simulate {
        #[command(flatten)]
        opts: SimulateOpts,
        /// JSON file mirroring the flags; explicit flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Successive-addition sweep: repetition vs pairwise parity at matched
    /// model counts (CSV/JSON).
    CompareCodes {
        #[command(flatten)]
        opts: CompareOpts,
        /// JSON file mirroring the flags; explicit flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Confidence bound for an (alpha, N, M, eps1, eps2) estimator (JSON).
    Confidence {
        #[command(flatten)]
        opts: EstimatorOpts,
        /// Theta sweep grid step (refined automatically).
        #[arg(long = "grid-step", default_value_t = commands::DEFAULT_GRID_STEP_HELP)]
        grid_step: f64,
    },
    /// Run the fraction-accurate estimator against an oracle spec (JSON).
    Estimate {
        #[command(flatten)]
        opts: EstimatorOpts,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON oracle spec {"categories":[{"probability":..,"accuracy":..},..]};
        /// defaults to a single always-correct category.
        #[arg(long = "oracle-spec")]
        oracle_spec: Option<PathBuf>,
    },
    /// Perceptron separability probe for a parity target, raw vs
    /// quadratically transformed features (JSON).
    XorDemo {
        #[command(flatten)]
        opts: XorDemoOpts,
    },
    /// Disjoint near-equal dataset splits for targeted bagging (JSON).
    BagPlan {
        #[arg(long = "n-items")]
        n_items: usize,
        #[arg(long = "n-targets")]
        n_targets: usize,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Simulate { opts, config } => run_simulate(opts, config, &cli.output),
        Command::CompareCodes { opts, config } => run_compare_codes(opts, config, &cli.output),
        Command::Confidence { opts, grid_step } => run_confidence(&opts, grid_step, &cli.output),
        Command::Estimate {
            opts,
            seed,
            oracle_spec,
        } => run_estimate(&opts, seed, oracle_spec.as_ref(), &cli.output),
        Command::XorDemo { opts } => run_xor_demo(&opts, &cli.output),
        Command::BagPlan { n_items, n_targets } => run_bag_plan(n_items, n_targets, &cli.output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<parity_codes::Error>() {
                Some(parity_codes::Error::InvalidArgument(_)) => 2,
                Some(parity_codes::Error::Capacity(_))
                | Some(parity_codes::Error::InsufficientSamples(_)) => 3,
                None => 1,
            };
            ExitCode::from(code)
        }
    }
}
