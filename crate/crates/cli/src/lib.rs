//! Command-line front end: argument parsing, command execution and output formats.

pub mod args;
mod commands;
pub mod error;
pub mod output;
#[cfg(test)]
mod tests;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;
pub use commands::run;
pub use error::CliError;

/// Parses `argv` and runs the command, returning its exit status.
pub fn try_execute<I, T>(argv: I) -> Result<i32, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return Ok(0);
        }
        Err(e) => return Err(CliError::invalid(e.to_string().trim_end())),
    };
    run(cli)
}

/// [`try_execute`], printing failures as JSON on standard error.
pub fn execute<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    try_execute(argv).unwrap_or_else(|e| {
        eprintln!("{}", e.to_json());
        e.exit_code
    })
}
