use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = lipopt_harness::cli::Cli::parse();
    match lipopt_harness::cli::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
