//! Exact solution of the 1-D ideal-gas Riemann problem.
//!
//! States are given as `(ρ, u, θ)` in the lattice's dimensionless units. The
//! gas pressure is `ρθ/2`; for a 1-D monatomic gas `γ = 3`. Reports use
//! `p = ρθ`, see [`GasState::reported_pressure`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ratio of specific heats of a one-dimensional monatomic gas.
pub const GAMMA_1D: f64 = 3.0;

const TOLERANCE: f64 = 1e-12;
const MAX_NEWTON: usize = 100;
const MAX_BISECTION: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasState {
    pub rho: f64,
    pub u: f64,
    pub theta: f64,
}

impl GasState {
    pub fn new(rho: f64, u: f64, theta: f64) -> Self {
        Self { rho, u, theta }
    }

    /// Thermodynamic pressure `ρθ/2`.
    pub fn pressure(&self) -> f64 {
        0.5 * self.rho * self.theta
    }

    /// `ρθ`, the pressure convention used in plateau reports.
    pub fn reported_pressure(&self) -> f64 {
        self.rho * self.theta
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.pressure() / self.rho).sqrt()
    }

    fn from_pressure(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, u, theta: 2.0 * p / rho }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.theta > 0.0 && self.u.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "gas state needs ρ > 0 and θ > 0, got ({}, {}, {})",
                self.rho, self.u, self.theta
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Wave {
    /// Both sides already share the star state.
    None,
    Shock {
        speed: f64,
    },
    Rarefaction {
        head: f64,
        tail: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiemannSolution {
    pub gamma: f64,
    pub left: GasState,
    pub right: GasState,
    /// Thermodynamic star pressure `ρθ/2`.
    pub p_star: f64,
    pub u_star: f64,
    pub rho_star_left: f64,
    pub rho_star_right: f64,
    pub left_wave: Wave,
    pub right_wave: Wave,
    pub iterations: usize,
}

fn pressure_function(p: f64, state: &GasState, gamma: f64) -> (f64, f64) {
    let pk = state.pressure();
    let c = state.sound_speed(gamma);
    if p > pk {
        let a = 2.0 / ((gamma + 1.0) * state.rho);
        let b = (gamma - 1.0) / (gamma + 1.0) * pk;
        let root = (a / (p + b)).sqrt();
        ((p - pk) * root, root * (1.0 - 0.5 * (p - pk) / (p + b)))
    } else {
        let ratio = p / pk;
        let z = (gamma - 1.0) / (2.0 * gamma);
        (2.0 * c / (gamma - 1.0) * (ratio.powf(z) - 1.0), ratio.powf(-(gamma + 1.0) / (2.0 * gamma)) / (state.rho * c))
    }
}

/// Star state and wave structure of the Riemann problem `left | right`.
pub fn solve_riemann(left: GasState, right: GasState, gamma: f64) -> Result<RiemannSolution> {
    left.validate()?;
    right.validate()?;
    if !(gamma > 1.0) {
        return Err(Error::InvalidArgument(format!("γ must exceed 1, got {gamma}")));
    }
    let (cl, cr) = (left.sound_speed(gamma), right.sound_speed(gamma));
    let du = right.u - left.u;
    if 2.0 * (cl + cr) / (gamma - 1.0) <= du {
        return Err(Error::Vacuum);
    }
    let (pl, pr) = (left.pressure(), right.pressure());
    let f = |p: f64| {
        let (fl, dl) = pressure_function(p, &left, gamma);
        let (fr, dr) = pressure_function(p, &right, gamma);
        (fl + fr + du, dl + dr)
    };

    let (p_star, iterations) = if left == right {
        (pl, 0)
    } else {
        let z = (gamma - 1.0) / (2.0 * gamma);
        let guess = ((cl + cr - 0.5 * (gamma - 1.0) * du) / (cl / pl.powf(z) + cr / pr.powf(z))).powf(1.0 / z);
        newton(f, guess.max(TOLERANCE))
            .or_else(|| bisection(|p| f(p).0, pl.max(pr)))
            .ok_or(Error::NoConvergence(MAX_NEWTON + MAX_BISECTION))?
    };

    let u_star = 0.5 * (left.u + right.u)
        + 0.5 * (pressure_function(p_star, &right, gamma).0 - pressure_function(p_star, &left, gamma).0);
    let (rho_star_left, left_wave) = star_side(&left, p_star, u_star, gamma, -1.0);
    let (rho_star_right, right_wave) = star_side(&right, p_star, u_star, gamma, 1.0);
    Ok(RiemannSolution {
        gamma,
        left,
        right,
        p_star,
        u_star,
        rho_star_left,
        rho_star_right,
        left_wave,
        right_wave,
        iterations,
    })
}

fn newton(f: impl Fn(f64) -> (f64, f64), start: f64) -> Option<(f64, usize)> {
    let mut p = start;
    for k in 1..=MAX_NEWTON {
        let (val, der) = f(p);
        let next = p - val / der;
        if !next.is_finite() || next <= 0.0 {
            return None;
        }
        let change = 2.0 * (next - p).abs() / (next + p);
        p = next;
        if change < TOLERANCE {
            return Some((p, k));
        }
    }
    None
}

fn bisection(f: impl Fn(f64) -> f64, scale: f64) -> Option<(f64, usize)> {
    let mut lo = TOLERANCE;
    let mut hi = 10.0 * scale;
    // f is increasing; widen until the root is bracketed
    while f(hi) < 0.0 {
        hi *= 10.0;
        if !hi.is_finite() {
            return None;
        }
    }
    if f(lo) > 0.0 {
        return None;
    }
    for k in 1..=MAX_BISECTION {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo) < TOLERANCE * hi {
            return Some((0.5 * (lo + hi), k));
        }
    }
    None
}

/// Star density and wave on one side; `dir` is −1 for left, +1 for right.
fn star_side(state: &GasState, p_star: f64, u_star: f64, gamma: f64, dir: f64) -> (f64, Wave) {
    let pk = state.pressure();
    let c = state.sound_speed(gamma);
    let g = (gamma - 1.0) / (gamma + 1.0);
    if p_star > pk {
        let ratio = p_star / pk;
        let rho = state.rho * (ratio + g) / (g * ratio + 1.0);
        let speed = state.u + dir * c * ((gamma + 1.0) / (2.0 * gamma) * ratio + (gamma - 1.0) / (2.0 * gamma)).sqrt();
        (rho, Wave::Shock { speed })
    } else if p_star < pk {
        let ratio = p_star / pk;
        let rho = state.rho * ratio.powf(1.0 / gamma);
        let c_star = c * ratio.powf((gamma - 1.0) / (2.0 * gamma));
        (rho, Wave::Rarefaction { head: state.u + dir * c, tail: u_star + dir * c_star })
    } else {
        (state.rho, Wave::None)
    }
}

impl RiemannSolution {
    pub fn left_star(&self) -> GasState {
        GasState::from_pressure(self.rho_star_left, self.u_star, self.p_star)
    }

    pub fn right_star(&self) -> GasState {
        GasState::from_pressure(self.rho_star_right, self.u_star, self.p_star)
    }

    /// Star pressure in the `ρθ` convention.
    pub fn reported_p_star(&self) -> f64 {
        2.0 * self.p_star
    }

    /// Speed of the fastest shock, if any.
    pub fn shock_speed(&self) -> Option<f64> {
        [self.left_wave, self.right_wave]
            .into_iter()
            .filter_map(|w| match w {
                Wave::Shock { speed } => Some(speed),
                _ => None,
            })
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
    }

    /// Self-similar state at `ξ = x/t`.
    pub fn sample(&self, xi: f64) -> GasState {
        if xi <= self.u_star {
            match self.left_wave {
                Wave::Shock { speed } if xi < speed => self.left,
                Wave::Rarefaction { head, .. } if xi < head => self.left,
                Wave::Rarefaction { tail, .. } if xi < tail => self.fan(&self.left, xi, 1.0),
                _ => self.left_star(),
            }
        } else {
            match self.right_wave {
                Wave::Shock { speed } if xi > speed => self.right,
                Wave::Rarefaction { head, .. } if xi > head => self.right,
                Wave::Rarefaction { tail, .. } if xi > tail => self.fan(&self.right, xi, -1.0),
                _ => self.right_star(),
            }
        }
    }

    /// Isentropic fan interior; `sign` is +1 for the left fan, −1 for the right.
    fn fan(&self, state: &GasState, xi: f64, sign: f64) -> GasState {
        let gamma = self.gamma;
        let c = state.sound_speed(gamma);
        let base = 2.0 / (gamma + 1.0) + sign * (gamma - 1.0) / ((gamma + 1.0) * c) * (state.u - xi);
        let rho = state.rho * base.powf(2.0 / (gamma - 1.0));
        let u = 2.0 / (gamma + 1.0) * (sign * c + 0.5 * (gamma - 1.0) * state.u + xi);
        let p = state.pressure() * base.powf(2.0 * gamma / (gamma - 1.0));
        GasState::from_pressure(rho, u, p)
    }

    /// Mass, momentum and energy jump residuals across the shock on the
    /// given side (`None` when that side is not a shock).
    pub fn shock_residuals(&self, left_side: bool) -> Option<[f64; 3]> {
        let (wave, pre, post) = if left_side {
            (self.left_wave, self.left, self.left_star())
        } else {
            (self.right_wave, self.right, self.right_star())
        };
        let Wave::Shock { speed } = wave else { return None };
        let g = self.gamma;
        let flux = |s: &GasState| {
            let p = s.pressure();
            let energy = p / (g - 1.0) + 0.5 * s.rho * s.u * s.u;
            [s.rho * (s.u - speed), s.rho * s.u * (s.u - speed) + p, energy * (s.u - speed) + p * s.u]
        };
        let (a, b) = (flux(&pre), flux(&post));
        Some([b[0] - a[0], b[1] - a[1], b[2] - a[2]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard() -> RiemannSolution {
        solve_riemann(GasState::new(3.0, 0.0, 1.0), GasState::new(1.0, 0.0, 1.0), GAMMA_1D).unwrap()
    }

    #[test]
    fn density_step_star_state() {
        let s = standard();
        assert!(matches!(s.left_wave, Wave::Rarefaction { .. }));
        assert!(matches!(s.right_wave, Wave::Shock { .. }));
        assert!((s.reported_p_star() - 1.65).abs() < 0.005);
        assert!((s.u_star - 0.22).abs() < 0.005);
        assert!((s.rho_star_left - 2.46).abs() < 0.005);
        assert!((s.rho_star_right - 1.18).abs() < 0.005);
        assert!((s.left_star().theta - 0.67).abs() < 0.005);
        assert!((s.right_star().theta - 1.40).abs() < 0.005);
    }

    #[test]
    fn identical_states_are_trivial() {
        let g = GasState::new(2.0, 0.0, 1.3);
        let s = solve_riemann(g, g, GAMMA_1D).unwrap();
        assert_eq!(s.u_star, 0.0);
        assert_eq!(s.left_wave, Wave::None);
        assert_eq!(s.right_wave, Wave::None);
        assert_eq!(s.sample(0.3), g);
    }

    #[test]
    fn vacuum_is_reported() {
        let l = GasState::new(1.0, -5.0, 1.0);
        let r = GasState::new(1.0, 5.0, 1.0);
        assert_eq!(solve_riemann(l, r, GAMMA_1D), Err(Error::Vacuum));
    }

    #[test]
    fn far_field_and_contact() {
        let s = standard();
        assert_eq!(s.sample(-100.0), s.left);
        assert_eq!(s.sample(100.0), s.right);
        let a = s.sample(s.u_star - 1e-12);
        let b = s.sample(s.u_star + 1e-12);
        assert!((a.pressure() - b.pressure()).abs() < 1e-14);
        assert_eq!(a.u, b.u);
        assert!(a.rho > b.rho);
    }

    #[test]
    fn rankine_hugoniot() {
        let r = standard().shock_residuals(false).unwrap();
        assert!(r.iter().all(|x| x.abs() < 1e-10), "{r:?}");
        assert!(standard().shock_residuals(true).is_none());
    }

    #[test]
    fn rejects_bad_input() {
        let g = GasState::new(1.0, 0.0, 1.0);
        assert!(solve_riemann(GasState::new(0.0, 0.0, 1.0), g, 3.0).is_err());
        assert!(solve_riemann(g, g, 1.0).is_err());
    }
}
