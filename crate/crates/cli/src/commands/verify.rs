use std::io::Write;

use tlbm_core::equilibrium::{expand, sample_grid, verify_moments};

use super::{emit, parse_range, to_json};
use crate::args::VerifyArgs;
use crate::config::ExpansionField;
use crate::error::{CliError, CliResult};

pub fn run(args: VerifyArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let model = args.model.source()?.resolve()?;
    let spec = ExpansionField::Label(args.expansion).resolve()?;
    let poly = expand(&spec)?;
    if args.grid == 0 {
        return Err(CliError::Usage("grid needs at least one point".into()));
    }
    let samples = sample_grid(args.rho, parse_range(&args.u_range)?, parse_range(&args.theta_range)?, args.grid);
    let report = verify_moments(&model, &poly, &samples, args.tolerance)?;
    emit(None, &to_json(&report)?, stdout)?;
    if report.m_max < 0 {
        return Err(CliError::Expectation(format!(
            "{} reproduces no moment on q = {} (m_max = {})",
            report.expansion, report.q, report.m_max
        )));
    }
    if !report.pass {
        return Err(CliError::Expectation(format!(
            "moment error {:.3e} exceeds {:.1e} for m ≤ {}",
            report.max_error, report.tolerance, report.m_max
        )));
    }
    Ok(())
}
