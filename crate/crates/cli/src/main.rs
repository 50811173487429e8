mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    // Usage errors exit 1; 2 is kept for precondition violations.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Repair(a) => commands::repair(a),
        Command::Permute(a) => commands::permute(a),
        Command::HasseCheck(a) => commands::hasse_check(a),
        Command::Compare(a) => commands::compare(a),
        Command::Serve(a) => commands::serve(a),
        Command::Normalize(a) => commands::normalize(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
