use std::process::ExitCode;

use clap::Parser;
use coopkit_cli::args::{Cli, Command};
use coopkit_cli::error::{self, CliError};
use coopkit_cli::report;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(error::EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result: Result<u8, CliError> = match cli.command {
        Command::Validate(a) => report::validate(&a),
        Command::Analyze(a) => report::analyze(&a),
        Command::Robust(a) => report::robust(&a),
        Command::Demo(a) => report::demo(&a),
        Command::Export(a) => report::export(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
