use std::process::ExitCode;

use casimir_media::cli::{emit, run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    ExitCode::from(emit(&cli, result))
}
