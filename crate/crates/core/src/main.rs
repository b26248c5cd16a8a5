use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cellular_ia::harness::{self, Overrides};
use cellular_ia::{IaError, Topology};

#[derive(Parser)]
#[command(name = "cellular-ia", version, about = "Interference-alignment designs for cellular downlinks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct OverrideArgs {
    /// Replace the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Replace the scenario trial count.
    #[arg(long)]
    trials: Option<usize>,
    /// Replace the scenario output path.
    #[arg(long)]
    out: Option<String>,
}

impl From<OverrideArgs> for Overrides {
    fn from(a: OverrideArgs) -> Self {
        Overrides { seed: a.seed, trials: a.trials, output_path: a.out }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its results JSON.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
        /// Also write the averaged rate curve as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print antenna, CSI and complexity tables.
    Tables {
        #[arg(long)]
        topology: Topology,
        /// Dimensions as key=value, e.g. K=6 M=3 d=2.
        dims: Vec<String>,
    },
    /// Check the antenna conditions of a scenario.
    Check {
        scenario: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
}

fn run(cli: Cli) -> Result<bool, IaError> {
    match cli.command {
        Command::Run { scenario, overrides, csv } => {
            let out = harness::run_scenario(&scenario, &overrides.into(), csv.as_deref())?;
            println!("{}", out.display());
            Ok(true)
        }
        Command::Tables { topology, dims } => {
            print!("{}", harness::print_tables(topology, &dims)?);
            Ok(true)
        }
        Command::Check { scenario, overrides } => {
            let (ok, text) = harness::check_scenario(&scenario, &overrides.into())?;
            print!("{text}");
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let message = e.to_string().replace('\n', " ");
            eprintln!("error: kind={} message={message}", e.kind());
            ExitCode::from(2)
        }
    }
}
