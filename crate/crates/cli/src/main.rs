mod args;
mod commands;
mod config;
mod error;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    if let Some(n) = commands::thread_count(std::env::var("POLYCURVE_THREADS").ok())? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    commands::execute(cli.command)
}

fn main() {
    if let Err(e) = run() {
        eprintln!("polycurve: {e}");
        std::process::exit(e.exit_code());
    }
}
