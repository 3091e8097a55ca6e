use clap::Parser;
use congestion_cli::config::Command;
use congestion_cli::{run, CliError};
use std::path::PathBuf;
use std::process::ExitCode;

/// Solvers for a congestion-constrained transport model and its
/// hard-congestion limit.
#[derive(Debug, Parser)]
#[command(name = "congestion", version, about)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON file with parameters; defaults apply to missing fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Seed of the randomized verification suite.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli
        .config
        .as_ref()
        .map(std::fs::read_to_string)
        .transpose()
        .map_err(CliError::from)
        .and_then(|text| run(cli.command, text.as_deref(), &cli.out, cli.seed));
    match result {
        Ok(paths) => {
            for path in paths {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(error) => {
            eprintln!("{}", error.to_json());
            ExitCode::from(error.exit_code() as u8)
        }
    }
}
