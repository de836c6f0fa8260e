use std::io::Write;
use std::path::Path;

use serde::Serialize;
use tlbm_core::simulator::{extract_plateaus, parse_snapshot_csv, Fields, ShockTubeConfig, Snapshot};

use super::simulate::RunRecord;
use super::{emit, parse_probes, to_json};
use crate::args::CompareArgs;
use crate::error::{CliError, CliResult};

const DEFAULT_PROBES: (usize, usize) = (430, 650);

#[derive(Debug, Serialize)]
struct ProbeDiff {
    node: usize,
    simulated: Fields,
    reference: Fields,
    /// simulated − reference
    difference: Fields,
}

#[derive(Debug, Serialize)]
struct Metrics {
    nodes: usize,
    /// Mean absolute difference per field.
    l1: Fields,
    /// Largest absolute difference per field.
    linf: Fields,
    plateaus: [ProbeDiff; 2],
}

fn read_snapshot(path: &Path) -> CliResult<Snapshot> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    parse_snapshot_csv(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn norms(a: &Snapshot, b: &Snapshot) -> (Fields, Fields) {
    let n = a.len() as f64;
    let (mut l1, mut linf) = ([0.0; 4], [0.0f64; 4]);
    for x in 1..=a.len() {
        let (fa, fb) = (a.at(x), b.at(x));
        let d = [fa.rho - fb.rho, fa.u - fb.u, fa.theta - fb.theta, fa.p - fb.p];
        for k in 0..4 {
            l1[k] += d[k].abs() / n;
            linf[k] = linf[k].max(d[k].abs());
        }
    }
    let fields = |v: [f64; 4]| Fields { rho: v[0], u: v[1], theta: v[2], p: v[3] };
    (fields(l1), fields(linf))
}

pub fn run(args: CompareArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let sim = read_snapshot(&args.simulation)?;
    let (reference, run_probes) = if let Some(path) = &args.reference {
        (read_snapshot(path)?, DEFAULT_PROBES)
    } else if let Some(path) = &args.run {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        let record: RunRecord =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let tube = &record.config.shock_tube;
        (tube.exact_profile_at(record.lattice_spacing, record.final_step)?, tube.probe_nodes())
    } else if let (Some(time), Some(dx)) = (args.time, args.dx) {
        let tube = ShockTubeConfig {
            nodes: sim.len(),
            interface: args.interface,
            rho_bar: args.rho_bar,
            dense_side: args.dense_side.into(),
            ..Default::default()
        };
        (tube.exact_profile_at(dx, time)?, tube.probe_nodes())
    } else {
        return Err(CliError::Usage("give --run, --reference, or --time with --dx".into()));
    };
    if sim.len() != reference.len() {
        return Err(CliError::Usage(format!("node counts differ: {} vs {}", sim.len(), reference.len())));
    }
    let (a, b) = match &args.probes {
        Some(p) => parse_probes(p)?,
        None => run_probes,
    };
    let ps = extract_plateaus(&sim, a, b)?;
    let pr = extract_plateaus(&reference, a, b)?;
    let diff =
        |s: Fields, r: Fields| Fields { rho: s.rho - r.rho, u: s.u - r.u, theta: s.theta - r.theta, p: s.p - r.p };
    let probe = |s: &tlbm_core::simulator::PlateauSample, r: &tlbm_core::simulator::PlateauSample| ProbeDiff {
        node: s.node,
        simulated: s.value,
        reference: r.value,
        difference: diff(s.value, r.value),
    };
    let (l1, linf) = norms(&sim, &reference);
    let metrics =
        Metrics { nodes: sim.len(), l1, linf, plateaus: [probe(&ps.first, &pr.first), probe(&ps.second, &pr.second)] };
    emit(args.out.as_deref(), &to_json(&metrics)?, stdout)
}
