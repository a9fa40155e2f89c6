use std::process::ExitCode;

use clap::Parser;
use survroute_cli::{execute, Cli};

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("survroute: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
