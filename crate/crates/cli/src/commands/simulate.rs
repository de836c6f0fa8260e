use std::io::Write;

use serde::{Deserialize, Serialize};
use tlbm_core::equilibrium::{expand, ExpansionSpec};
use tlbm_core::model::ModelRecord;
use tlbm_core::simulator::{self, extract_plateaus, snapshot_csv, PlateauReport, PlateauSample, StabilityVerdict};

use super::{parse_probes, to_json, workers_from_env};
use crate::args::SimulateArgs;
use crate::config::{ExpansionField, SimulationConfig};
use crate::error::{CliError, CliResult};
use crate::manifest::OutputSet;

/// Contents of `run.json`.
#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct RunRecord {
    pub model: ModelRecord,
    pub expansion: ExpansionSpec,
    pub config: SimulationConfig,
    pub lattice_spacing: f64,
    pub final_step: usize,
    pub verdict: StabilityVerdict,
    pub plateaus: PlateauReport,
    /// Density oscillation after each step.
    pub fluctuation: Vec<f64>,
}

fn merge(args: &SimulateArgs) -> CliResult<SimulationConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => SimulationConfig::empty(),
    };
    if args.model.is_set() {
        cfg.model = Some(args.model.source()?);
    }
    if let Some(e) = &args.expansion {
        cfg.expansion = Some(ExpansionField::Label(e.clone()));
    }
    let tube = &mut cfg.shock_tube;
    tube.rho_bar = args.rho_bar.unwrap_or(tube.rho_bar);
    tube.tau = args.tau.unwrap_or(tube.tau);
    tube.nodes = args.nodes.unwrap_or(tube.nodes);
    tube.interface = args.interface.unwrap_or(tube.interface);
    tube.steps = args.steps.or(tube.steps);
    tube.snapshot_interval = args.snapshot_interval.or(tube.snapshot_interval);
    if let Some(side) = args.dense_side {
        tube.dense_side = side.into();
    }
    if let Some(p) = &args.probes {
        tube.probes = Some(parse_probes(p)?);
    }
    Ok(cfg)
}

fn describe(label: &str, s: &PlateauSample) -> String {
    let (v, m) = (s.value, s.median);
    format!(
        "{label} node {}: rho {:.4} u {:.4} theta {:.4} p {:.4} (window median rho {:.4} u {:.4} theta {:.4} p {:.4})",
        s.node, v.rho, v.u, v.theta, v.p, m.rho, m.u, m.theta, m.p
    )
}

pub fn run(args: SimulateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let mut cfg = merge(&args)?;
    let model = cfg.model.as_ref().ok_or_else(|| CliError::Usage("no model given".into()))?.resolve()?;
    let spec = cfg.expansion.as_ref().ok_or_else(|| CliError::Usage("no expansion given".into()))?.resolve()?;
    let poly = expand(&spec)?;
    cfg.shock_tube.validate()?;
    cfg.shock_tube.steps = Some(cfg.shock_tube.resolved_steps(&model)?);

    let traj = simulator::run(&model, &poly, &cfg.shock_tube, workers_from_env()?)?;
    let last = traj.final_snapshot();
    let (a, b) = cfg.shock_tube.probe_nodes();
    let plateaus = extract_plateaus(last, a, b)?;

    let mut outputs = OutputSet::create(&args.out)?;
    for snap in &traj.snapshots[..traj.snapshots.len() - 1] {
        outputs.write(&format!("snapshot_{:06}.csv", snap.step), snapshot_csv(snap).as_bytes())?;
    }
    outputs.write("final.csv", snapshot_csv(last).as_bytes())?;
    let record = RunRecord {
        model: model.to_record(),
        expansion: spec.clone(),
        config: cfg.clone(),
        lattice_spacing: model.lattice_spacing(),
        final_step: last.step,
        verdict: traj.verdict.clone(),
        plateaus: plateaus.clone(),
        fluctuation: traj.fluctuation.clone(),
    };
    outputs.write("run.json", to_json(&record)?.as_bytes())?;
    let manifest =
        outputs.finish("simulate", serde_json::to_value(&cfg)?, Some(model.to_record()), Some(spec.clone()))?;

    let v = &traj.verdict;
    let status = match (v.stable, v.failure_mode) {
        (true, _) => "stable".to_string(),
        (false, Some(mode)) => format!(
            "UNSTABLE at step {} ({}, node {})",
            v.failure_step.unwrap_or(0),
            mode.label(),
            v.failure_node.unwrap_or(0)
        ),
        (false, None) => "UNSTABLE".to_string(),
    };
    let mut report = format!(
        "q = {} p = {:?} v2 = {:.6} {spec}: {} steps, {status}\n",
        model.q(),
        model.ratios().lattice_speeds(),
        model.v2(),
        traj.steps
    );
    report += &describe("probe 1", &plateaus.first);
    report.push('\n');
    report += &describe("probe 2", &plateaus.second);
    report.push('\n');
    for w in &plateaus.warnings {
        report += &format!("warning: {w}\n");
    }
    report += &format!("outputs in {} (hash {})\n", args.out.display(), manifest.determinism_hash);
    stdout.write_all(report.as_bytes()).map_err(CliError::io("<stdout>"))?;

    if args.expect_stable && !v.stable {
        return Err(CliError::Expectation(format!("run was expected to be stable: {status}")));
    }
    Ok(())
}
