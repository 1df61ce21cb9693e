mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::{exit_code, CliError};

fn main() -> ExitCode {
    let argv: Vec<_> = std::env::args_os().collect();
    let merged = match args::merge_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(exit_code::USAGE);
        }
    };
    let cli = match Cli::try_parse_from(merged) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit_code::USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::code(&e))
        }
    }
}
