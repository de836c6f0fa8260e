use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;
use tlbm_core::catalog;
use tlbm_core::equilibrium::{expand, EquilibriumPolynomial};
use tlbm_core::model::VelocityModel;
use tlbm_core::simulator::{self, format_value, ShockTubeConfig, StabilityVerdict, Workers};

use super::{emit, workers_from_env};
use crate::args::ScanArgs;
use crate::config::ExpansionField;
use crate::error::{CliError, CliResult};
use crate::select::{parse_f64, parse_list};

struct Case<'a> {
    model: &'a (String, VelocityModel),
    poly: &'a EquilibriumPolynomial,
    rho_bar: f64,
    tau: f64,
}

pub fn run(args: ScanArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let models = parse_list(&args.models, |id| Ok((id.to_string(), catalog::lookup(id)?.derive()?)))?;
    let polys = parse_list(&args.expansions, |e| Ok(expand(&ExpansionField::Label(e.to_string()).resolve()?)?))?;
    let rho_bars = parse_list(&args.rho_bars, parse_f64)?;
    let taus = parse_list(&args.taus, parse_f64)?;
    if models.is_empty() || polys.is_empty() || rho_bars.is_empty() || taus.is_empty() {
        return Err(CliError::Usage("every scan axis needs at least one value".into()));
    }
    let mut cases = Vec::new();
    for model in &models {
        for poly in &polys {
            for &rho_bar in &rho_bars {
                for &tau in &taus {
                    cases.push(Case { model, poly, rho_bar, tau });
                }
            }
        }
    }
    let simulate = |c: &Case| -> CliResult<StabilityVerdict> {
        let config = ShockTubeConfig {
            rho_bar: c.rho_bar,
            tau: c.tau,
            dense_side: args.dense_side.into(),
            steps: args.steps,
            ..Default::default()
        };
        Ok(simulator::run(&c.model.1, c.poly, &config, Workers::Serial)?.verdict)
    };
    let verdicts: Vec<CliResult<StabilityVerdict>> = workers_from_env()?.install(|parallel| {
        if parallel {
            cases.par_iter().map(simulate).collect()
        } else {
            cases.iter().map(simulate).collect()
        }
    })?;

    let mut csv = String::from(
        "model,expansion,rho_bar,tau,stable,steps,failure_step,failure_mode,failure_node,max_fluctuation\n",
    );
    for (c, v) in cases.iter().zip(verdicts) {
        let v = v?;
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{}",
            c.model.0,
            c.poly.spec(),
            c.rho_bar,
            c.tau,
            v.stable,
            v.steps_completed,
            v.failure_step.map(|s| s.to_string()).unwrap_or_default(),
            v.failure_mode.map(|m| m.label()).unwrap_or_default(),
            v.failure_node.map(|s| s.to_string()).unwrap_or_default(),
            format_value(v.max_fluctuation)
        );
    }
    emit(args.out.as_deref(), &csv, stdout)
}
