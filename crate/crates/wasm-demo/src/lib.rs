//! Browser bindings. Every export returns a JSON string so the page needs no
//! extra glue; the plain-Rust functions underneath are what the tests use.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use tlbm_core::catalog;
use tlbm_core::equilibrium::{expand, ExpansionSpec};
use tlbm_core::model::{solve_model, ModelRecord, RatioTuple};
use tlbm_core::riemann::{solve_riemann, GasState, GAMMA_1D};
use tlbm_core::simulator::{self, ShockTubeConfig, StabilityVerdict, Workers};

/// Longest run the page may request, to keep the tab responsive.
pub const MAX_STEPS: usize = 2000;

#[derive(Serialize)]
struct Profile {
    x: Vec<f64>,
    rho: Vec<f64>,
    u: Vec<f64>,
    theta: Vec<f64>,
    p: Vec<f64>,
}

impl Profile {
    fn from_states(x: Vec<f64>, states: impl Iterator<Item = (f64, f64, f64)>) -> Self {
        let mut out = Profile { x, rho: Vec::new(), u: Vec::new(), theta: Vec::new(), p: Vec::new() };
        for (rho, u, theta) in states {
            out.rho.push(rho);
            out.u.push(u);
            out.theta.push(theta);
            out.p.push(rho * theta);
        }
        out
    }
}

#[derive(Serialize)]
struct TubeRun {
    steps: usize,
    verdict: StabilityVerdict,
    simulated: Profile,
    exact: Profile,
}

fn json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// All models for `q` and lattice speeds such as `"1,2,3"`.
pub fn derive_json(q: usize, speeds: &str) -> Result<String, String> {
    let speeds = speeds
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<u64>().map_err(|_| format!("not a lattice speed: {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let ratios = RatioTuple::new(q, speeds).map_err(|e| e.to_string())?;
    let models = solve_model(&ratios).map_err(|e| e.to_string())?;
    json(&models.iter().map(|m| m.to_record()).collect::<Vec<ModelRecord>>())
}

/// Exact density-step solution at `n` points of `ξ = x/t` in `[xi_lo, xi_hi]`.
pub fn riemann_json(rho_left: f64, rho_right: f64, xi_lo: f64, xi_hi: f64, n: usize) -> Result<String, String> {
    if n < 2 || xi_hi.partial_cmp(&xi_lo) != Some(std::cmp::Ordering::Greater) {
        return Err("need at least two points on an increasing range".into());
    }
    let sol = solve_riemann(GasState::new(rho_left, 0.0, 1.0), GasState::new(rho_right, 0.0, 1.0), GAMMA_1D)
        .map_err(|e| e.to_string())?;
    let xi: Vec<f64> = (0..n).map(|i| xi_lo + (xi_hi - xi_lo) * i as f64 / (n - 1) as f64).collect();
    let states: Vec<_> = xi.iter().map(|&x| sol.sample(x)).map(|s| (s.rho, s.u, s.theta)).collect();
    json(&Profile::from_states(xi, states.into_iter()))
}

/// Shock tube with a catalog model; `steps = 0` picks the default length.
pub fn shock_tube_json(model_id: &str, expansion: &str, rho_bar: f64, steps: usize) -> Result<String, String> {
    let model = catalog::lookup(model_id).and_then(|e| e.derive()).map_err(|e| e.to_string())?;
    let spec: ExpansionSpec = expansion.parse().map_err(|e: tlbm_core::Error| e.to_string())?;
    let poly = expand(&spec).map_err(|e| e.to_string())?;
    let config = ShockTubeConfig { rho_bar, steps: (steps > 0).then_some(steps.min(MAX_STEPS)), ..Default::default() };
    let traj = simulator::run(&model, &poly, &config, Workers::Serial).map_err(|e| e.to_string())?;
    let last = traj.final_snapshot();
    let exact = config.exact_profile(&model, last.step).map_err(|e| e.to_string())?;
    let nodes: Vec<f64> = (1..=last.len()).map(|x| x as f64).collect();
    let fields = |s: &simulator::Snapshot| (0..s.len()).map(|i| (s.rho[i], s.u[i], s.theta[i])).collect::<Vec<_>>();
    json(&TubeRun {
        steps: traj.steps,
        verdict: traj.verdict.clone(),
        simulated: Profile::from_states(nodes.clone(), fields(last).into_iter()),
        exact: Profile::from_states(nodes, fields(&exact).into_iter()),
    })
}

#[wasm_bindgen]
pub fn derive_models(q: usize, speeds: &str) -> Result<String, JsError> {
    derive_json(q, speeds).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn riemann_profile(rho_left: f64, rho_right: f64, xi_lo: f64, xi_hi: f64, n: usize) -> Result<String, JsError> {
    riemann_json(rho_left, rho_right, xi_lo, xi_hi, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn run_shock_tube(model_id: &str, expansion: &str, rho_bar: f64, steps: usize) -> Result<String, JsError> {
    shock_tube_json(model_id, expansion, rho_bar, steps).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn derive_lists_both_q5_branches() {
        let v: Value = serde_json::from_str(&derive_json(5, "1, 3").unwrap()).unwrap();
        let v2: Vec<f64> = v.as_array().unwrap().iter().map(|m| m["v2"].as_f64().unwrap()).collect();
        assert_eq!(v2.len(), 2);
        assert!((v2[0] - 0.553432).abs() < 1e-6);
        assert!(derive_json(5, "1,x").is_err());
        assert_eq!(derive_json(5, "1,2").unwrap(), "[]");
    }

    #[test]
    fn riemann_profile_spans_both_states() {
        let v: Value = serde_json::from_str(&riemann_json(3.0, 1.0, -3.0, 3.0, 61).unwrap()).unwrap();
        let rho = v["rho"].as_array().unwrap();
        assert_eq!(rho.len(), 61);
        assert_eq!(rho[0].as_f64(), Some(3.0));
        assert_eq!(rho[60].as_f64(), Some(1.0));
        assert!(riemann_json(3.0, 1.0, 1.0, 1.0, 5).is_err());
    }

    #[test]
    fn short_tube_run() {
        let v: Value = serde_json::from_str(&shock_tube_json("q5", "HE3", 3.0, 20).unwrap()).unwrap();
        assert_eq!(v["steps"], 20);
        assert_eq!(v["verdict"]["stable"], true);
        assert_eq!(v["simulated"]["rho"].as_array().unwrap().len(), 1000);
        assert!(shock_tube_json("q4", "HE3", 3.0, 20).is_err());
        assert!(shock_tube_json("q5", "XX3", 3.0, 20).is_err());
    }
}
