//! 1-D stream-collide BGK solver for the thermal shock tube.
//!
//! Time step and node spacing are chosen so that every velocity hops a whole
//! number of nodes: `Δt = 1`, `Δx = v₂/p₂`, and population `i` moves `p_i`
//! nodes per step. Both ends carry Dirichlet bands, `max p_i` nodes wide, held
//! at the equilibrium of the initial state on that side.

mod lattice;
mod output;
mod plateau;

use serde::{Deserialize, Serialize};

pub use lattice::{LatticeState, Workers};
pub use output::{format_value, parse_snapshot_csv, snapshot_csv, CSV_HEADER};
pub use plateau::{extract_plateaus, Fields, PlateauReport, PlateauSample, FLATNESS_LIMIT, PLATEAU_HALF_WINDOW};

use crate::equilibrium::EquilibriumPolynomial;
use crate::error::{Error, Result};
use crate::model::VelocityModel;
use crate::riemann::{solve_riemann, GasState, RiemannSolution, GAMMA_1D};

/// Which end of the tube holds the dense state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Dense gas on nodes `X < interface`.
    Left,
    /// Dense gas on nodes `X ≥ interface`.
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryMode {
    #[default]
    EquilibriumBands,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShockTubeConfig {
    pub nodes: usize,
    /// First node (1-based) of the right-hand state.
    pub interface: usize,
    pub rho_bar: f64,
    pub dense_side: Side,
    pub tau: f64,
    /// `None` picks the step count at which the exact shock has travelled
    /// 35% of the tube.
    pub steps: Option<usize>,
    /// Record a snapshot every this many steps; the final state is always kept.
    pub snapshot_interval: Option<usize>,
    /// Probe nodes (1-based). `None` uses 430 and 650, mirrored when the
    /// dense gas sits on the right.
    pub probes: Option<(usize, usize)>,
    pub boundary: BoundaryMode,
}

impl Default for ShockTubeConfig {
    fn default() -> Self {
        Self {
            nodes: 1000,
            interface: 500,
            rho_bar: 3.0,
            dense_side: Side::Left,
            tau: 1.0,
            steps: None,
            snapshot_interval: None,
            probes: None,
            boundary: BoundaryMode::EquilibriumBands,
        }
    }
}

const DEFAULT_PROBES: (usize, usize) = (430, 650);
const SHOCK_TRAVEL: f64 = 0.35;
const STEPS_WITHOUT_SHOCK: usize = 100;

impl ShockTubeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.rho_bar > 0.0 && self.rho_bar.is_finite()) {
            return bad(format!("rho_bar must be positive, got {}", self.rho_bar));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return bad(format!("tau must be positive, got {}", self.tau));
        }
        if self.interface < 2 || self.interface > self.nodes {
            return bad(format!("interface {} outside 2..={}", self.interface, self.nodes));
        }
        let (a, b) = self.probe_nodes();
        if a == 0 || b == 0 || a > self.nodes || b > self.nodes {
            return bad(format!("probe nodes ({a}, {b}) outside 1..={}", self.nodes));
        }
        if self.snapshot_interval == Some(0) {
            return bad("snapshot interval must be positive".into());
        }
        Ok(())
    }

    /// The same experiment reflected about the tube centre.
    pub fn mirrored(&self) -> Self {
        let reflect = |x: usize| self.nodes + 1 - x;
        let (a, b) = self.probe_nodes();
        Self {
            interface: self.nodes + 2 - self.interface,
            dense_side: match self.dense_side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            },
            probes: Some((reflect(a), reflect(b))),
            ..self.clone()
        }
    }

    pub fn probe_nodes(&self) -> (usize, usize) {
        let reflect = |x: usize| (self.nodes + 1).saturating_sub(x);
        self.probes.unwrap_or_else(|| match self.dense_side {
            Side::Left => DEFAULT_PROBES,
            Side::Right => (reflect(DEFAULT_PROBES.0), reflect(DEFAULT_PROBES.1)),
        })
    }

    /// Initial states to the left and right of the interface.
    pub fn riemann_states(&self) -> (GasState, GasState) {
        let dense = GasState::new(self.rho_bar, 0.0, 1.0);
        let light = GasState::new(1.0, 0.0, 1.0);
        match self.dense_side {
            Side::Left => (dense, light),
            Side::Right => (light, dense),
        }
    }

    pub fn riemann_solution(&self) -> Result<RiemannSolution> {
        let (l, r) = self.riemann_states();
        solve_riemann(l, r, GAMMA_1D)
    }

    pub fn resolved_steps(&self, model: &VelocityModel) -> Result<usize> {
        if let Some(s) = self.steps {
            return Ok(s);
        }
        Ok(match self.riemann_solution()?.shock_speed() {
            Some(speed) => {
                let distance = SHOCK_TRAVEL * self.nodes as f64 * model.lattice_spacing();
                (distance / speed.abs()).round() as usize
            }
            None => STEPS_WITHOUT_SHOCK,
        })
    }

    /// Physical position of node `x` (1-based) relative to the interface,
    /// which sits midway between nodes `interface − 1` and `interface`.
    pub fn position(&self, x: usize, spacing: f64) -> f64 {
        (x as f64 - (self.interface as f64 - 0.5)) * spacing
    }

    /// Exact solution sampled at every node after `step` time steps.
    pub fn exact_profile(&self, model: &VelocityModel, step: usize) -> Result<Snapshot> {
        self.exact_profile_at(model.lattice_spacing(), step)
    }

    /// As [`ShockTubeConfig::exact_profile`] for a given node spacing.
    pub fn exact_profile_at(&self, spacing: f64, step: usize) -> Result<Snapshot> {
        let sol = self.riemann_solution()?;
        let (l, r) = self.riemann_states();
        let states: Vec<GasState> = (1..=self.nodes)
            .map(|x| match step {
                0 if x < self.interface => l,
                0 => r,
                _ => sol.sample(self.position(x, spacing) / step as f64),
            })
            .collect();
        Ok(Snapshot {
            step,
            rho: states.iter().map(|s| s.rho).collect(),
            u: states.iter().map(|s| s.u).collect(),
            theta: states.iter().map(|s| s.theta).collect(),
        })
    }
}

/// Macroscopic fields of the whole tube at one step, index 0 is node 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub step: usize,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
}

impl Snapshot {
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// Fields at node `x` (1-based).
    pub fn at(&self, x: usize) -> Fields {
        let i = x - 1;
        Fields::new(self.rho[i], self.u[i], self.theta[i])
    }

    /// Total variation of density in excess of the net jump. Zero for a
    /// monotone profile; grows with spurious oscillation.
    pub fn density_oscillation(&self) -> f64 {
        let tv: f64 = self.rho.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
        match (self.rho.first(), self.rho.last()) {
            (Some(a), Some(b)) => tv - (b - a).abs(),
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureMode {
    NonFinite,
    NonPositiveDensity,
    RunawayVelocity,
}

impl FailureMode {
    pub fn label(self) -> &'static str {
        match self {
            FailureMode::NonFinite => "non-finite",
            FailureMode::NonPositiveDensity => "non-positive-density",
            FailureMode::RunawayVelocity => "runaway-velocity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub steps_completed: usize,
    pub failure_step: Option<usize>,
    pub failure_mode: Option<FailureMode>,
    /// First offending node (1-based).
    pub failure_node: Option<usize>,
    /// Largest [`Snapshot::density_oscillation`] seen during the run.
    pub max_fluctuation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub steps: usize,
    pub snapshots: Vec<Snapshot>,
    /// Density oscillation after every completed step, starting at step 0.
    pub fluctuation: Vec<f64>,
    pub verdict: StabilityVerdict,
}

impl Trajectory {
    pub fn final_snapshot(&self) -> &Snapshot {
        self.snapshots.last().expect("a run always records its final state")
    }
}

fn check_health(snap: &Snapshot, max_speed: f64) -> Option<(FailureMode, usize)> {
    for (i, ((&rho, &u), &theta)) in snap.rho.iter().zip(&snap.u).zip(&snap.theta).enumerate() {
        let mode = if !(rho.is_finite() && u.is_finite() && theta.is_finite()) {
            FailureMode::NonFinite
        } else if rho <= 0.0 {
            FailureMode::NonPositiveDensity
        } else if u.abs() > max_speed {
            FailureMode::RunawayVelocity
        } else {
            continue;
        };
        return Some((mode, i + 1));
    }
    None
}

/// Runs the shock tube and monitors its health after every step.
///
/// `workers` selects the collision thread count; results are identical for
/// any choice.
pub fn run(
    model: &VelocityModel,
    poly: &EquilibriumPolynomial,
    config: &ShockTubeConfig,
    workers: Workers,
) -> Result<Trajectory> {
    config.validate()?;
    let steps = config.resolved_steps(model)?;
    let feq = poly.compile();
    let mut state = LatticeState::shock_tube(model, &feq, config)?;
    let max_speed = model.max_speed();
    let mut snapshots = Vec::new();
    let mut fluctuation = Vec::with_capacity(steps + 1);

    let failure = workers.install(|parallel| loop {
        let snap = state.snapshot();
        let step = snap.step;
        fluctuation.push(snap.density_oscillation());
        if let Some((mode, node)) = check_health(&snap, max_speed) {
            snapshots.push(snap);
            return Some((step, mode, node));
        }
        if step == steps {
            snapshots.push(snap);
            return None;
        }
        if config.snapshot_interval.is_some_and(|k| step % k == 0) {
            snapshots.push(snap);
        }
        state.step(&feq, config.tau, parallel);
    })?;
    let step = state.time();

    let verdict = StabilityVerdict {
        stable: failure.is_none(),
        steps_completed: step,
        failure_step: failure.map(|f| f.0),
        failure_mode: failure.map(|f| f.1),
        failure_node: failure.map(|f| f.2),
        max_fluctuation: fluctuation.iter().copied().filter(|x| x.is_finite()).fold(0.0, f64::max),
    };
    Ok(Trajectory { steps, snapshots, fluctuation, verdict })
}
