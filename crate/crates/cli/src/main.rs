use std::process::ExitCode;

use clap::Parser;
use fermiorder_cli::{execute, Cli};

fn main() -> ExitCode {
    ExitCode::from(execute(&Cli::parse()))
}
