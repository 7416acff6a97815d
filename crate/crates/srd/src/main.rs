use std::process::ExitCode;

use clap::Parser;
use srd::cli::Cli;
use srd::commands::execute;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("srd {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}
