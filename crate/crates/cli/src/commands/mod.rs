mod catalog;
mod compare;
mod derive;
mod expand;
mod riemann;
mod scan;
mod simulate;
mod sweep;
mod verify;

use std::io::Write;
use std::path::Path;

use tlbm_core::simulator::Workers;

use crate::args::{Cli, Command};
use crate::error::{CliError, CliResult};

/// Environment variable holding the worker count; unset or 0 means all cores.
pub const WORKERS_ENV: &str = "TLBM_WORKERS";

pub fn workers_from_env() -> CliResult<Workers> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(Workers::Auto),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(0) => Ok(Workers::Auto),
            Ok(n) => Ok(Workers::Threads(n)),
            Err(_) => Err(CliError::Usage(format!("{WORKERS_ENV} must be a non-negative integer, got {s:?}"))),
        },
    }
}

pub fn dispatch(cli: Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Derive(a) => derive::run(a, stdout),
        Command::Sweep(a) => sweep::run(a, stdout),
        Command::Expand(a) => expand::run(a, stdout),
        Command::Verify(a) => verify::run(a, stdout),
        Command::Simulate(a) => simulate::run(a, stdout),
        Command::Riemann(a) => riemann::run(a, stdout),
        Command::Compare(a) => compare::run(a, stdout),
        Command::StabilityScan(a) => scan::run(a, stdout),
        Command::Catalog(a) => catalog::run(a, stdout),
    }
}

/// Writes `text` to `path`, or to stdout when no path is given.
fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(CliError::io(p)),
        None => stdout.write_all(text.as_bytes()).map_err(CliError::io("<stdout>")),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// `lo:hi` as a pair of numbers.
fn parse_range(text: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::Usage(format!("expected lo:hi, got {text:?}"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

/// `a,b` as two 1-based node indices.
fn parse_probes(text: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("expected two node indices a,b, got {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}
