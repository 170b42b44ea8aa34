use std::process::ExitCode;

use clap::Parser;
use ctdt_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match ctdt_cli::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ctdt: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
