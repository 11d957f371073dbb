mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::run(&cli)
        .and_then(|a| a.render(cli.format))
        .and_then(|text| output::emit(&text, cli.out.as_ref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pitree: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
