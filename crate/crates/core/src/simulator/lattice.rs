use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{ShockTubeConfig, Snapshot};
use crate::equilibrium::CompiledEquilibrium;
use crate::error::{Error, Result};
use crate::model::VelocityModel;

/// Thread count for the per-node collision pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Workers {
    Serial,
    /// rayon's global pool.
    #[default]
    Auto,
    Threads(usize),
}

impl Workers {
    /// Runs `f` with the requested parallelism; the flag tells it whether to
    /// use data-parallel loops.
    pub fn install<R: Send>(self, f: impl FnOnce(bool) -> R + Send) -> Result<R> {
        #[cfg(feature = "parallel")]
        match self {
            Workers::Serial | Workers::Threads(1) => Ok(f(false)),
            Workers::Auto => Ok(f(true)),
            Workers::Threads(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
                Ok(pool.install(|| f(true)))
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = self;
            Ok(f(false))
        }
    }
}

/// Populations of every node, stored node-major in the velocity order
/// `0, +v₂, −v₂, +v₄, −v₄, …`, plus the macroscopic fields last computed
/// from them.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    nodes: usize,
    q: usize,
    f: Vec<f64>,
    scratch: Vec<f64>,
    velocities: Vec<f64>,
    weights: Vec<f64>,
    shifts: Vec<i64>,
    band: usize,
    left_band: Vec<f64>,
    right_band: Vec<f64>,
    rho: Vec<f64>,
    u: Vec<f64>,
    theta: Vec<f64>,
    time: usize,
}

/// `(ρ, u, θ)` from one node's populations. Mirror pairs are summed first so
/// that reflecting the populations reflects the result exactly.
fn node_moments(f: &[f64], velocities: &[f64]) -> (f64, f64, f64) {
    let mut rho = f[0];
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for k in (1..f.len()).step_by(2) {
        let v = velocities[k];
        rho += f[k] + f[k + 1];
        m1 += v * (f[k] - f[k + 1]);
        m2 += v * v * (f[k] + f[k + 1]);
    }
    let u = m1 / rho;
    (rho, u, 2.0 * (m2 / rho - u * u))
}

/// Sum with Neumaier compensation.
fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for x in values {
        let t = sum + x;
        c += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + c
}

impl LatticeState {
    /// Every node at the equilibrium of its side's initial state.
    pub fn shock_tube(model: &VelocityModel, feq: &CompiledEquilibrium, config: &ShockTubeConfig) -> Result<Self> {
        config.validate()?;
        let velocities = model.velocities();
        let weights = model.full_normalized_weights();
        let shifts = model.lattice_shifts();
        let q = velocities.len();
        let band = *model.ratios().lattice_speeds().last().unwrap() as usize;
        let nodes = config.nodes;
        if nodes <= 2 * band {
            return Err(Error::InvalidArgument(format!(
                "{nodes} nodes cannot hold two boundary bands of width {band}"
            )));
        }
        let (left, right) = config.riemann_states();
        let mut left_band = vec![0.0; q];
        let mut right_band = vec![0.0; q];
        feq.fill(&velocities, &weights, left.rho, left.u, left.theta, &mut left_band);
        feq.fill(&velocities, &weights, right.rho, right.u, right.theta, &mut right_band);

        let mut f = Vec::with_capacity(nodes * q);
        for x in 1..=nodes {
            f.extend_from_slice(if x < config.interface { &left_band } else { &right_band });
        }
        let mut state = Self {
            nodes,
            q,
            scratch: vec![0.0; f.len()],
            f,
            velocities,
            weights,
            shifts,
            band,
            left_band,
            right_band,
            rho: vec![0.0; nodes],
            u: vec![0.0; nodes],
            theta: vec![0.0; nodes],
            time: 0,
        };
        state.update_macros(false);
        Ok(state)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn time(&self) -> usize {
        self.time
    }

    /// Width of each Dirichlet band in nodes.
    pub fn band_width(&self) -> usize {
        self.band
    }

    /// Populations of node `x` (1-based).
    pub fn populations(&self, x: usize) -> &[f64] {
        &self.f[(x - 1) * self.q..x * self.q]
    }

    pub fn populations_mut(&mut self, x: usize) -> &mut [f64] {
        &mut self.f[(x - 1) * self.q..x * self.q]
    }

    /// Recomputes `(ρ, u, θ)` at every node from the populations.
    pub fn update_macros(&mut self, parallel: bool) {
        let vel = &self.velocities;
        let q = self.q;
        let kernel = |(((f, rho), u), theta): (((&[f64], &mut f64), &mut f64), &mut f64)| {
            (*rho, *u, *theta) = node_moments(f, vel);
        };
        #[cfg(feature = "parallel")]
        if parallel {
            self.f
                .par_chunks(q)
                .zip(self.rho.par_iter_mut())
                .zip(self.u.par_iter_mut())
                .zip(self.theta.par_iter_mut())
                .for_each(kernel);
            return;
        }
        let _ = parallel;
        self.f.chunks(q).zip(self.rho.iter_mut()).zip(self.u.iter_mut()).zip(self.theta.iter_mut()).for_each(kernel);
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot { step: self.time, rho: self.rho.clone(), u: self.u.clone(), theta: self.theta.clone() }
    }

    /// BGK relaxation towards the equilibrium of the stored macroscopic
    /// fields. With `τ = 1` the result is the equilibrium itself.
    pub fn collide(&mut self, feq: &CompiledEquilibrium, tau: f64, parallel: bool) {
        let omega = 1.0 / tau;
        let keep = 1.0 - omega;
        let (vel, w, q) = (&self.velocities, &self.weights, self.q);
        let relax = |buf: &mut Vec<f64>, (((f, &rho), &u), &theta): (((&mut [f64], &f64), &f64), &f64)| {
            feq.fill(vel, w, rho, u, theta, buf);
            for (fi, &ei) in f.iter_mut().zip(buf.iter()) {
                *fi = keep * *fi + omega * ei;
            }
        };
        #[cfg(feature = "parallel")]
        if parallel {
            self.f
                .par_chunks_mut(q)
                .zip(self.rho.par_iter())
                .zip(self.u.par_iter())
                .zip(self.theta.par_iter())
                .for_each_init(|| vec![0.0; q], relax);
            return;
        }
        let _ = parallel;
        let mut buf = vec![0.0; q];
        self.f
            .chunks_mut(q)
            .zip(self.rho.iter())
            .zip(self.u.iter())
            .zip(self.theta.iter())
            .for_each(|item| relax(&mut buf, item));
    }

    /// Moves population `i` by its lattice shift. Populations leaving the
    /// tube are dropped; the bands refill the vacated nodes.
    pub fn stream(&mut self) {
        let (n, q) = (self.nodes as i64, self.q);
        self.scratch.fill(0.0);
        for (i, &shift) in self.shifts.iter().enumerate() {
            let (from, to) = if shift >= 0 { (0, n - shift) } else { (-shift, n) };
            for node in from..to {
                let dest = (node + shift) as usize;
                self.scratch[dest * q + i] = self.f[node as usize * q + i];
            }
        }
        std::mem::swap(&mut self.f, &mut self.scratch);
        self.time += 1;
    }

    /// Resets both end bands to their fixed equilibria.
    pub fn apply_boundaries(&mut self) {
        let q = self.q;
        for node in 0..self.band {
            self.f[node * q..(node + 1) * q].copy_from_slice(&self.left_band);
            let far = self.nodes - 1 - node;
            self.f[far * q..(far + 1) * q].copy_from_slice(&self.right_band);
        }
    }

    /// Collide, stream, refill the bands, then refresh the macroscopic fields.
    pub fn step(&mut self, feq: &CompiledEquilibrium, tau: f64, parallel: bool) {
        self.collide(feq, tau, parallel);
        self.stream();
        self.apply_boundaries();
        self.update_macros(parallel);
    }

    /// `Σ ρ` over nodes `lo..=hi` (1-based), compensated.
    pub fn mass(&self, lo: usize, hi: usize) -> f64 {
        compensated_sum((lo..=hi).flat_map(|x| self.populations(x).iter().copied()))
    }

    /// `Σ ρu` over nodes `lo..=hi` (1-based), compensated.
    pub fn momentum(&self, lo: usize, hi: usize) -> f64 {
        compensated_sum((lo..=hi).flat_map(|x| self.populations(x).iter().zip(&self.velocities).map(|(f, v)| f * v)))
    }
}
