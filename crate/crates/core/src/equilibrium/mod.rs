//! Discretized Maxwell-Boltzmann equilibria.
//!
//! The unit-density equilibrium `(πθ)^{−1/2} exp(−(v − u)²/θ)` is written as
//! `π^{−1/2} exp(−v²) P(v; u, t)` and `P` is truncated as a power series in
//! the macroscopic variables:
//!
//! - **Taylor (TE)**: `u` and `t = θ − θ₀` count as the same order, terms with
//!   `a + b ≤ N` are kept. `P` has degree `2N` in `v`.
//! - **Hermite (HE)**: `u` and `σ` count as the same order where
//!   `εσ² = θ − 1`. Only `εσ²` ever appears, so the series is stored in
//!   `t = θ − 1` with `a + 2b ≤ N`. `P` has degree `N` in `v`.
//!
//! The `θ^{−1/2}` prefactor is expanded inside the series. On a lattice the
//! discrete equilibrium is `f_i = ρ w̄_i P(v_i; u, t)`, the normalized weight
//! carrying the `π^{−1/2}`.

mod series;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use series::{Exponents, Series};

use crate::error::{Error, Result};
use crate::model::VelocityModel;
use crate::moments::{gaussian_moment_coefficient, mb_moment_terms};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExpansionKind {
    #[serde(rename = "TE")]
    Taylor,
    #[serde(rename = "HE")]
    Hermite,
}

impl ExpansionKind {
    /// Truncation weight of one power of `t`.
    fn weight_t(self) -> u32 {
        match self {
            ExpansionKind::Taylor => 1,
            ExpansionKind::Hermite => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ExpansionKind::Taylor => "TE",
            ExpansionKind::Hermite => "HE",
        }
    }
}

/// Which truncation of the equilibrium to build and at what order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExpansionSpec {
    pub kind: ExpansionKind,
    pub order: u32,
    /// Reference temperature of the Taylor expansion. The Hermite expansion
    /// is always about `θ = 1`.
    #[serde(default = "one", with = "rational_str")]
    pub theta0: BigRational,
}

fn one() -> BigRational {
    BigRational::one()
}

mod rational_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl ExpansionSpec {
    pub fn taylor(order: u32) -> Self {
        Self { kind: ExpansionKind::Taylor, order, theta0: BigRational::one() }
    }

    pub fn hermite(order: u32) -> Self {
        Self { kind: ExpansionKind::Hermite, order, theta0: BigRational::one() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::InvalidArgument("expansion order must be at least 1".into()));
        }
        if self.theta0 <= BigRational::zero() {
            return Err(Error::InvalidArgument("reference temperature must be positive".into()));
        }
        if self.kind == ExpansionKind::Hermite && !self.theta0.is_one() {
            return Err(Error::InvalidArgument("the Hermite expansion is about θ = 1".into()));
        }
        Ok(())
    }
}

impl fmt::Display for ExpansionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.label(), self.order)
    }
}

impl FromStr for ExpansionSpec {
    type Err = Error;

    /// Parses `TE3`, `he10`, ...
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("expected TE<N> or HE<N>, got {s:?}"));
        if s.len() < 3 || !s.is_char_boundary(2) {
            return Err(bad());
        }
        let (kind, order) = s.split_at(2);
        let order: u32 = order.parse().map_err(|_| bad())?;
        let spec = match kind.to_ascii_uppercase().as_str() {
            "TE" => Self::taylor(order),
            "HE" => Self::hermite(order),
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Exact coefficients of `P(v; u, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumPolynomial {
    spec: ExpansionSpec,
    terms: BTreeMap<Exponents, BigRational>,
}

impl EquilibriumPolynomial {
    pub fn spec(&self) -> &ExpansionSpec {
        &self.spec
    }

    /// Non-zero coefficients keyed by `(v, u, t)` exponents.
    pub fn terms(&self) -> &BTreeMap<Exponents, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, v: u32, u: u32, t: u32) -> BigRational {
        self.terms.get(&(v, u, t)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn v_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// `P(v; u, t)` in floating point.
    pub fn eval(&self, v: f64, u: f64, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(a, b, c), x)| x.to_f64().unwrap() * v.powi(a as i32) * u.powi(b as i32) * t.powi(c as i32))
            .sum()
    }

    /// Floating-point form specialised for repeated evaluation.
    pub fn compile(&self) -> CompiledEquilibrium {
        CompiledEquilibrium::new(self)
    }
}

/// Builds `P` for `spec`.
pub fn expand(spec: &ExpansionSpec) -> Result<EquilibriumPolynomial> {
    spec.validate()?;
    let wt = spec.kind.weight_t();
    let n = spec.order;
    let theta0 = &spec.theta0;
    let rat = |x: i64| BigRational::from_integer(x.into());

    // exponent of exp: v²/θ₀ − (v − u)²/(θ₀ + t) = v²(1/θ₀ − h) + (2uv − u²)h
    let h = Series::reciprocal_in_t(theta0, wt, n);
    let v2 = Series::monomial((2, 0, 0), BigRational::one(), wt, n);
    let inv_theta0 = Series::constant(theta0.recip(), wt, n);
    let cross = Series::monomial((1, 1, 0), rat(2), wt, n).add(&Series::monomial((0, 2, 0), rat(-1), wt, n));
    let exponent = v2.mul(&inv_theta0.add(&h.scale(&rat(-1)))).add(&cross.mul(&h));
    let prefactor = Series::binomial_in_t(&BigRational::new((-1).into(), 2.into()), theta0, wt, n);
    let terms = prefactor.mul(&exponent.exp()).into_terms();
    Ok(EquilibriumPolynomial { spec: spec.clone(), terms })
}

/// Taylor truncation of order `order` about `(u, θ) = (0, θ₀)`.
pub fn expand_te(order: u32, theta0: BigRational) -> Result<EquilibriumPolynomial> {
    expand(&ExpansionSpec { kind: ExpansionKind::Taylor, order, theta0 })
}

/// Hermite truncation of order `order`.
pub fn expand_he(order: u32) -> Result<EquilibriumPolynomial> {
    expand(&ExpansionSpec::hermite(order))
}

/// `P` regrouped by powers of `v` in floating point.
#[derive(Debug, Clone)]
pub struct CompiledEquilibrium {
    /// `by_v_power[k]` lists `(u power, t power, coefficient)` of `vᵏ`.
    by_v_power: Vec<Vec<(u32, u32, f64)>>,
    max_u: usize,
    max_t: usize,
    theta0: f64,
    scale: f64,
}

impl CompiledEquilibrium {
    fn new(poly: &EquilibriumPolynomial) -> Self {
        let mut by_v_power = vec![Vec::new(); poly.v_degree() as usize + 1];
        let (mut max_u, mut max_t) = (0, 0);
        for (&(v, u, t), c) in &poly.terms {
            by_v_power[v as usize].push((u, t, c.to_f64().unwrap()));
            max_u = max_u.max(u as usize);
            max_t = max_t.max(t as usize);
        }
        let theta0 = poly.spec.theta0.to_f64().unwrap();
        Self { by_v_power, max_u, max_t, theta0, scale: theta0.sqrt().recip() }
    }

    /// Writes `f_i = ρ w̄_i P(v_i; u, θ − θ₀)` for every velocity into `out`.
    ///
    /// Terms are accumulated in a fixed order, so identical inputs give
    /// bit-identical outputs.
    pub fn fill(&self, velocities: &[f64], weights: &[f64], rho: f64, u: f64, theta: f64, out: &mut [f64]) {
        let t = theta - self.theta0;
        let mut upow = vec![1.0; self.max_u + 1];
        let mut tpow = vec![1.0; self.max_t + 1];
        for k in 1..=self.max_u {
            upow[k] = upow[k - 1] * u;
        }
        for k in 1..=self.max_t {
            tpow[k] = tpow[k - 1] * t;
        }
        let coeffs: Vec<f64> = self
            .by_v_power
            .iter()
            .map(|row| row.iter().fold(0.0, |acc, &(a, b, c)| acc + c * upow[a as usize] * tpow[b as usize]))
            .collect();
        for ((f, &v), &w) in out.iter_mut().zip(velocities).zip(weights) {
            let p = coeffs.iter().rev().fold(0.0, |acc, &c| acc * v + c);
            let gauss = if self.theta0 == 1.0 { 1.0 } else { (v * v * (1.0 - 1.0 / self.theta0)).exp() * self.scale };
            *f = rho * w * p * gauss;
        }
    }
}

/// Discrete equilibrium `f_i^{eq}` for every velocity of `model`, in the
/// order of [`VelocityModel::velocities`].
pub fn evaluate_feq(
    model: &VelocityModel,
    poly: &EquilibriumPolynomial,
    rho: f64,
    u: f64,
    theta: f64,
) -> Result<Vec<f64>> {
    if !(theta > 0.0) {
        return Err(Error::InvalidArgument(format!("temperature must be positive, got {theta}")));
    }
    if !(rho >= 0.0) {
        return Err(Error::InvalidArgument(format!("density must be non-negative, got {rho}")));
    }
    let velocities = model.velocities();
    let mut out = vec![0.0; velocities.len()];
    poly.compile().fill(&velocities, &model.full_normalized_weights(), rho, u, theta, &mut out);
    Ok(out)
}

/// Highest moment order reproduced exactly: `min(N, q + 2 − 2N)` for the
/// Taylor form and `min(N, q + 2 − N)` for the Hermite form. Negative values
/// mean the order is too high for the lattice.
pub fn moment_accuracy(q: usize, spec: &ExpansionSpec) -> i64 {
    let n = spec.order as i64;
    let q = q as i64;
    match spec.kind {
        ExpansionKind::Taylor => n.min(q + 2 - 2 * n),
        ExpansionKind::Hermite => n.min(q + 2 - n),
    }
}

/// The `m`-th Maxwell-Boltzmann moment with the same `(u, t)` truncation
/// as `spec`, computed from the closed-form moment polynomial.
pub fn mb_moment_truncated(m: u32, spec: &ExpansionSpec, rho: f64, u: f64, theta: f64) -> f64 {
    let wt = spec.kind.weight_t();
    let theta0 = spec.theta0.to_f64().unwrap();
    let t = theta - theta0;
    let mut sum = 0.0;
    for (a, b, c) in mb_moment_terms(m) {
        // θᵇ = Σ_j C(b, j) θ₀^{b−j} tʲ
        let mut binom = BigInt::one();
        for j in 0..=b {
            if j > 0 {
                binom = binom * BigInt::from(b - j + 1) / BigInt::from(j);
            }
            if a + j * wt > spec.order {
                continue;
            }
            let coeff = &c * BigRational::from_integer(binom.clone());
            sum += coeff.to_f64().unwrap() * theta0.powi((b - j) as i32) * u.powi(a as i32) * t.powi(j as i32);
        }
    }
    rho * sum
}

/// `∫ exp(−v²) vᵐ P(v; u, t) dv / √π`, integrated monomial by monomial.
pub fn continuous_moment(m: u32, poly: &EquilibriumPolynomial, u: f64, t: f64) -> f64 {
    poly.terms
        .iter()
        .map(|(&(a, b, c), x)| {
            (x * gaussian_moment_coefficient(a + m)).to_f64().unwrap() * u.powi(b as i32) * t.powi(c as i32)
        })
        .sum()
}

/// One `(m, state)` comparison in a [`MomentReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentCheck {
    pub m: u32,
    pub rho: f64,
    pub u: f64,
    pub theta: f64,
    pub discrete: f64,
    pub reference: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub q: usize,
    pub expansion: String,
    pub m_max: i64,
    pub tolerance: f64,
    pub max_error: f64,
    pub pass: bool,
    pub checks: Vec<MomentCheck>,
}

/// Compares `Σ_i v_iᵐ f_i^{eq}` against the equally truncated analytic
/// moment for every `m ≤ m_max` and every `(ρ, u, θ)` sample.
pub fn verify_moments(
    model: &VelocityModel,
    poly: &EquilibriumPolynomial,
    samples: &[(f64, f64, f64)],
    tolerance: f64,
) -> Result<MomentReport> {
    let m_max = moment_accuracy(model.q(), poly.spec());
    let velocities = model.velocities();
    let compiled = poly.compile();
    let weights = model.full_normalized_weights();
    let mut f = vec![0.0; velocities.len()];
    let mut checks = Vec::new();
    for &(rho, u, theta) in samples {
        if !(theta > 0.0) || !(rho >= 0.0) {
            return Err(Error::InvalidArgument(format!("bad sample state ({rho}, {u}, {theta})")));
        }
        compiled.fill(&velocities, &weights, rho, u, theta, &mut f);
        for m in 0..=m_max.max(-1) {
            let m = m as u32;
            let discrete: f64 = velocities.iter().zip(&f).map(|(v, fi)| v.powi(m as i32) * fi).sum();
            let reference = mb_moment_truncated(m, poly.spec(), rho, u, theta);
            checks.push(MomentCheck { m, rho, u, theta, discrete, reference, error: (discrete - reference).abs() });
        }
    }
    let max_error = checks.iter().map(|c| c.error).fold(0.0, f64::max);
    Ok(MomentReport {
        q: model.q(),
        expansion: poly.spec().to_string(),
        m_max,
        tolerance,
        max_error,
        pass: max_error < tolerance,
        checks,
    })
}

/// `n × n` grid over `u ∈ [u_lo, u_hi]`, `θ ∈ [θ_lo, θ_hi]` at density `rho`.
pub fn sample_grid(rho: f64, u: (f64, f64), theta: (f64, f64), n: usize) -> Vec<(f64, f64, f64)> {
    let lerp = |(lo, hi): (f64, f64), i: usize| if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
    (0..n).flat_map(|i| (0..n).map(move |j| (rho, lerp(u, i), lerp(theta, j)))).collect()
}
