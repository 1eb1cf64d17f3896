use std::process::ExitCode;

use equigh_cli::{execute, parse_cli, CliError};

fn main() -> ExitCode {
    let config = match parse_cli(std::env::args_os()) {
        Ok(c) => c,
        Err(CliError::Help(text)) => {
            print!("{text}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("equigh: {e}");
            return ExitCode::from(2);
        }
    };
    match execute(&config) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("equigh: {e}");
            ExitCode::from(3)
        }
    }
}
