use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use newcomb::cli::{self, GameConfig};
use newcomb::decision::{region_grid, PredictorProfile};
use newcomb::sim::{compare, RngSpec};
use newcomb::tlg::{base_chain, game_tlg, to_dot};
use newcomb::Result;

/// Expected-utility analysis and oracle-frame simulation of Newcomb's problem.
#[derive(Debug, Parser)]
#[command(name = "newcomb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    options: Options,
}

#[derive(Debug, Args)]
struct Options {
    /// Game configuration (JSON). Defaults to the classic table with a random predictor.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output file. Defaults to standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    #[arg(long, global = true, value_name = "N")]
    trials: Option<u64>,

    #[arg(long, global = true, value_name = "N")]
    resolution: Option<usize>,

    #[arg(long, global = true, value_name = "N")]
    parallelism: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expected utilities, the preferred choice and the decision boundary.
    Expected,
    /// Decision regions over the predictor-accuracy square, as CSV.
    Region,
    /// The time-lines graph, as Graphviz DOT.
    Graph {
        /// Export the plain four-event chain instead of the unfolded graph.
        #[arg(long)]
        base_chain_only: bool,
    },
    /// Theoretical against simulated utilities for both choices, as JSON.
    Simulate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(cli::exit_code(&err))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let o = &cli.options;
    let config = match &o.config {
        Some(path) => cli::load_config(path)?,
        None => GameConfig::classic(PredictorProfile::RANDOM),
    }
    .with_overrides(o.seed, o.trials, o.resolution, o.parallelism)?;

    let text = match cli.command {
        Command::Expected => cli::to_json_text(&cli::expected_document(&config)),
        Command::Region => cli::region_csv(&region_grid(&config.utilities, config.resolution)?),
        Command::Graph { base_chain_only } => {
            let graph = if base_chain_only {
                base_chain(4)?
            } else {
                game_tlg()
            };
            to_dot(&graph)
        }
        Command::Simulate => {
            let table = compare(
                &config.utilities,
                &config.predictor,
                config.trials,
                RngSpec::new(config.seed),
                config.parallelism,
            )?;
            cli::to_json_text(&cli::simulation_document(&config, &table))
        }
    };

    match &o.out {
        Some(path) => cli::write_output(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
