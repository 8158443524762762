//! `ramify`: batch front end to the ramify library.
//!
//! Results go to stdout (or `--out`), errors to stderr as one JSON line.
//! Exit codes: 0 success, 1 malformed input, 2 infeasible or inadmissible,
//! 3 inconsistent presentation, 4 enumeration cap exceeded.

mod args;
mod commands;
mod error;
mod input;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::{CliError, Exit};
use output::Reply;

fn dispatch(cli: &Cli) -> Result<Reply, CliError> {
    match &cli.command {
        Command::Herbrand(c) => commands::herbrand::run(c, cli.format),
        Command::Group(c) => commands::group::run(c, cli.format),
        Command::Filtration(c) => commands::filtration::run(c, cli.format),
        Command::Plan(c) => commands::plan::run(c, cli.format),
        Command::Merge(c) => commands::merge::run(c, cli.format),
    }
}

fn write(cli: &Cli, body: &str) -> Result<(), CliError> {
    let io_err = |e: std::io::Error, at: String| CliError {
        exit: Exit::Malformed,
        code: "io-error",
        message: e.to_string(),
        location: Some(at),
        detail: None,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body).map_err(|e| io_err(e, path.display().to_string())),
        None => std::io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .map_err(|e| io_err(e, "stdout".into())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                Exit::Malformed as u8
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = dispatch(&cli).and_then(|reply| write(&cli, &reply.body).map(|_| reply.exit));
    match result {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(e) => {
            eprint!("{}", e.report());
            eprintln!();
            ExitCode::from(e.exit as u8)
        }
    }
}
