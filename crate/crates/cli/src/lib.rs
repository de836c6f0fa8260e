//! Command-line front end: model derivation, equilibrium dumps, moment
//! checks, shock-tube runs and comparison against the exact solution.

pub mod args;
mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod select;

use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

pub use commands::{dispatch, workers_from_env, WORKERS_ENV};
pub use error::{CliError, CliResult};

/// Parses `args`, runs the command and maps failures to exit codes.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match dispatch(cli, &mut lock) {
        Ok(()) => {
            let _ = lock.flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            e.into()
        }
    }
}
