use std::io::Write;

use serde::Serialize;
use tlbm_core::riemann::{solve_riemann, GasState, RiemannSolution};
use tlbm_core::simulator::{snapshot_csv, ShockTubeConfig, Snapshot};

use super::{emit, to_json};
use crate::args::RiemannArgs;
use crate::error::{CliError, CliResult};
use crate::select::{parse_f64, parse_list};

/// Star values in the `p = ρθ` reporting convention.
#[derive(Serialize)]
struct Reported {
    p_star: f64,
    u_star: f64,
    rho_left_star: f64,
    rho_right_star: f64,
    theta_left_star: f64,
    theta_right_star: f64,
}

#[derive(Serialize)]
struct Output {
    solution: RiemannSolution,
    reported: Reported,
    rankine_hugoniot: Vec<[f64; 3]>,
}

fn parse_state(text: &str) -> CliResult<GasState> {
    match parse_list(text, parse_f64)?[..] {
        [rho, u, theta] => Ok(GasState::new(rho, u, theta)),
        _ => Err(CliError::Usage(format!("expected rho,u,theta, got {text:?}"))),
    }
}

pub fn run(args: RiemannArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let left = parse_state(&args.left)?;
    let right = parse_state(&args.right)?;
    let solution = solve_riemann(left, right, args.gamma)?;
    if let (Some(path), Some(time), Some(dx)) = (&args.profile, args.time, args.dx) {
        if !(time > 0.0 && dx > 0.0) {
            return Err(CliError::Usage("--time and --dx must be positive".into()));
        }
        let tube = ShockTubeConfig { nodes: args.nodes, interface: args.interface, ..Default::default() };
        let states: Vec<GasState> = (1..=args.nodes).map(|x| solution.sample(tube.position(x, dx) / time)).collect();
        let snap = Snapshot {
            step: 0,
            rho: states.iter().map(|s| s.rho).collect(),
            u: states.iter().map(|s| s.u).collect(),
            theta: states.iter().map(|s| s.theta).collect(),
        };
        emit(Some(path), &snapshot_csv(&snap), stdout)?;
    }
    let (ls, rs) = (solution.left_star(), solution.right_star());
    let output = Output {
        reported: Reported {
            p_star: solution.reported_p_star(),
            u_star: solution.u_star,
            rho_left_star: ls.rho,
            rho_right_star: rs.rho,
            theta_left_star: ls.theta,
            theta_right_star: rs.theta,
        },
        rankine_hugoniot: [true, false].into_iter().filter_map(|side| solution.shock_residuals(side)).collect(),
        solution,
    };
    emit(None, &to_json(&output)?, stdout)
}
