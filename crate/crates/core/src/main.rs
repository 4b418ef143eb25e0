use std::process::ExitCode;

use clap::Parser;
use nhqm::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                eprintln!("{}", outcome.failure_json());
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let msg = serde_json::json!({ "error": e.to_string() });
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
