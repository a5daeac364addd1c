use clap::Parser;
use std::process::ExitCode;

use warpcheck_cli::{execute, Cli};

fn main() -> ExitCode {
    ExitCode::from(execute(Cli::parse()))
}
