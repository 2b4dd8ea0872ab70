use std::process::ExitCode;

use clap::Parser;
use depolar_sim::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match depolar_sim::run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
