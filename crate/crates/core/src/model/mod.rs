//! One-dimensional symmetric discrete-velocity models on regular lattices.
//!
//! A model with `q` (odd) velocities has `v₁ = 0` and pairs `±v_{2i}` whose
//! speeds are integer multiples `p_{2i}` of a common lattice spacing, so
//! every hop lands on a node. Weights are chosen so the discrete moments
//! `Ξ(n) = Σ w_i v_iⁿ` match the Gaussian moments up to `n = q + 1`.

mod closed_form;
pub mod poly;
mod solve;
mod tensor;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

pub use closed_form::{closed_form_q5, closed_form_q5_models, ClosedFormQ5, Q5Branch};
pub use solve::{build_polynomial, solve_model, ModelPolynomial};
pub use tensor::{tensor_product_model, MultiDimModel};

use crate::error::{Error, Result};
use crate::moments::{discrete_moment, gaussian_moment, SQRT_PI};

/// Weights with `|w̄| <` this are reported as ghost velocities.
pub const DEFAULT_GHOST_THRESHOLD: f64 = 1e-4;

/// Models whose moment residual exceeds this are flagged invalid.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Velocity count and the integer lattice speeds `p₂ < p₄ < … < p_{q−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RatioRecord", into = "RatioRecord")]
pub struct RatioTuple {
    q: usize,
    speeds: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RatioRecord {
    q: usize,
    p: Vec<u64>,
}

impl TryFrom<RatioRecord> for RatioTuple {
    type Error = Error;
    fn try_from(r: RatioRecord) -> Result<Self> {
        RatioTuple::new(r.q, r.p)
    }
}

impl From<RatioTuple> for RatioRecord {
    fn from(r: RatioTuple) -> Self {
        RatioRecord { q: r.q, p: r.speeds }
    }
}

impl RatioTuple {
    /// Builds the tuple from integer lattice speeds, dividing out any
    /// common factor.
    pub fn new(q: usize, speeds: Vec<u64>) -> Result<Self> {
        if q < 3 || q.is_multiple_of(2) {
            return Err(Error::InvalidVelocityCount(q));
        }
        if speeds.len() != q / 2 {
            return Err(Error::InvalidRatios(format!("q = {q} needs {} lattice speeds, got {}", q / 2, speeds.len())));
        }
        if speeds[0] == 0 {
            return Err(Error::InvalidRatios("lattice speeds must be positive".into()));
        }
        if let Some(w) = speeds.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidRatios(format!(
                "lattice speeds must be strictly increasing, got {} after {}",
                w[1], w[0]
            )));
        }
        let g = speeds.iter().fold(0u64, |acc, &p| acc.gcd(&p));
        Ok(Self { q, speeds: speeds.into_iter().map(|p| p / g).collect() })
    }

    /// Builds the tuple from the ratios `p̄₄, p̄₆, …` relative to `p̄₂ = 1`.
    pub fn from_normalized(q: usize, ratios: &[BigRational]) -> Result<Self> {
        if q < 3 || q.is_multiple_of(2) {
            return Err(Error::InvalidVelocityCount(q));
        }
        if ratios.len() + 1 != q / 2 {
            return Err(Error::InvalidRatios(format!(
                "q = {q} needs {} ratios beyond p̄₂ = 1, got {}",
                q / 2 - 1,
                ratios.len()
            )));
        }
        let one = BigRational::one();
        let mut prev = &one;
        for r in ratios {
            if r <= prev {
                return Err(Error::InvalidRatios(format!(
                    "ratios must exceed 1 and strictly increase, got {r} after {prev}"
                )));
            }
            prev = r;
        }
        let lcm = ratios.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let speeds = std::iter::once(BigRational::one())
            .chain(ratios.iter().cloned())
            .map(|r| {
                (r * &lcm)
                    .to_integer()
                    .to_u64()
                    .ok_or_else(|| Error::InvalidRatios("lattice speed overflows u64".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(q, speeds)
    }

    /// The classical three-velocity lattice.
    pub fn three() -> Self {
        Self { q: 3, speeds: vec![1] }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Integer speeds `p₂, p₄, …, p_{q−1}` in lattice units.
    pub fn lattice_speeds(&self) -> &[u64] {
        &self.speeds
    }

    /// `p̄_{2i} = p_{2i}/p₂`, starting with `p̄₂ = 1`.
    pub fn normalized(&self) -> Vec<BigRational> {
        let base = BigInt::from(self.speeds[0]);
        self.speeds.iter().map(|&p| BigRational::new(BigInt::from(p), base.clone())).collect()
    }

    /// `r = 1/p̄₄`, the parameter of the closed-form five-velocity family.
    pub fn r(&self) -> Option<BigRational> {
        self.speeds.get(1).map(|&p4| BigRational::new(BigInt::from(self.speeds[0]), BigInt::from(p4)))
    }
}

/// A solved 1-D model. Weights are stored for the non-negative velocities
/// `v₁ = 0, v₂, v₄, …`; each positive velocity has a mirror `−v` with the
/// same weight.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityModel {
    ratios: RatioTuple,
    v2: f64,
    weights: Vec<f64>,
    normalized: Vec<f64>,
    ghosts: Vec<bool>,
    all_positive: bool,
    residual: f64,
}

impl VelocityModel {
    /// Assembles a model from its base speed and normalized weights
    /// `w̄₁, w̄₂, w̄₄, …` and computes its moment residual.
    pub fn from_parts(ratios: RatioTuple, v2: f64, normalized: Vec<f64>) -> Result<Self> {
        if normalized.len() != ratios.q() / 2 + 1 {
            return Err(Error::InvalidArgument(format!(
                "q = {} needs {} normalized weights, got {}",
                ratios.q(),
                ratios.q() / 2 + 1,
                normalized.len()
            )));
        }
        if !(v2 > 0.0 && v2.is_finite()) {
            return Err(Error::InvalidArgument(format!("base speed must be positive, got {v2}")));
        }
        let weights = normalized.iter().map(|w| w * SQRT_PI).collect();
        let mut model = Self {
            ratios,
            v2,
            weights,
            all_positive: normalized.iter().all(|&w| w > 0.0),
            ghosts: Vec::new(),
            normalized,
            residual: 0.0,
        };
        model.ghosts = model.detect_ghosts(DEFAULT_GHOST_THRESHOLD);
        model.residual = model.moment_residual();
        Ok(model)
    }

    pub fn ratios(&self) -> &RatioTuple {
        &self.ratios
    }

    pub fn q(&self) -> usize {
        self.ratios.q()
    }

    pub fn v2(&self) -> f64 {
        self.v2
    }

    /// `w₁, w₂, w₄, …` (the symmetric partners are implied).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `w̄_i = w_i/√π` for the non-negative velocities.
    pub fn normalized_weights(&self) -> &[f64] {
        &self.normalized
    }

    pub fn ghost_flags(&self) -> &[bool] {
        &self.ghosts
    }

    pub fn has_ghosts(&self) -> bool {
        self.ghosts.iter().any(|&g| g)
    }

    pub fn all_positive(&self) -> bool {
        self.all_positive
    }

    /// Largest relative error of `Ξ(n)` against the Gaussian moment over
    /// even `n ≤ q + 1`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn is_valid(&self) -> bool {
        self.residual <= RESIDUAL_TOLERANCE
    }

    /// Positive velocities `v₂, v₄, …, v_{q−1}` ascending.
    pub fn positive_velocities(&self) -> impl Iterator<Item = f64> + '_ {
        let base = self.ratios.lattice_speeds()[0] as f64;
        self.ratios.lattice_speeds().iter().map(move |&p| self.v2 * p as f64 / base)
    }

    pub fn max_speed(&self) -> f64 {
        self.positive_velocities().last().unwrap()
    }

    /// Distance between neighbouring lattice nodes, `v₂/p₂` with unit time step.
    pub fn lattice_spacing(&self) -> f64 {
        self.v2 / self.ratios.lattice_speeds()[0] as f64
    }

    /// Full velocity set in the order `0, +v₂, −v₂, +v₄, −v₄, …`.
    pub fn velocities(&self) -> Vec<f64> {
        let mut out = vec![0.0];
        for v in self.positive_velocities() {
            out.push(v);
            out.push(-v);
        }
        out
    }

    /// Normalized weights matching [`VelocityModel::velocities`].
    pub fn full_normalized_weights(&self) -> Vec<f64> {
        let mut out = vec![self.normalized[0]];
        for &w in &self.normalized[1..] {
            out.push(w);
            out.push(w);
        }
        out
    }

    /// Signed whole-node hops per time step, matching [`VelocityModel::velocities`].
    pub fn lattice_shifts(&self) -> Vec<i64> {
        let mut out = vec![0];
        for &p in self.ratios.lattice_speeds() {
            out.push(p as i64);
            out.push(-(p as i64));
        }
        out
    }

    /// Flags each non-negative velocity whose normalized weight magnitude
    /// is below `threshold`.
    pub fn detect_ghosts(&self, threshold: f64) -> Vec<bool> {
        self.normalized.iter().map(|w| w.abs() < threshold).collect()
    }

    /// Re-flags ghosts with a custom threshold.
    pub fn with_ghost_threshold(mut self, threshold: f64) -> Self {
        self.ghosts = self.detect_ghosts(threshold);
        self
    }

    fn moment_residual(&self) -> f64 {
        (0..=self.q() as u32 + 1)
            .step_by(2)
            .map(|n| {
                let exact = gaussian_moment(n).to_f64();
                ((discrete_moment(self, n) - exact) / exact).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn to_record(&self) -> ModelRecord {
        ModelRecord {
            q: self.q(),
            p: self.ratios.lattice_speeds().to_vec(),
            v2: self.v2,
            weights_normalized: self.normalized.clone(),
            residual: self.residual,
            all_positive: self.all_positive,
            ghosts: self.ghosts.clone(),
        }
    }
}

/// JSON form of a model. Weights and ghost flags are listed for the
/// non-negative velocities only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub q: usize,
    pub p: Vec<u64>,
    pub v2: f64,
    pub weights_normalized: Vec<f64>,
    pub residual: f64,
    pub all_positive: bool,
    pub ghosts: Vec<bool>,
}

impl TryFrom<ModelRecord> for VelocityModel {
    type Error = Error;

    /// Residual and flags are recomputed from the stored speeds and weights.
    fn try_from(r: ModelRecord) -> Result<Self> {
        VelocityModel::from_parts(RatioTuple::new(r.q, r.p)?, r.v2, r.weights_normalized)
    }
}

impl Serialize for VelocityModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(s)
    }
}

impl<'de> Deserialize<'de> for VelocityModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let record = ModelRecord::deserialize(d)?;
        VelocityModel::try_from(record).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ratio_tuple_validation() {
        assert!(RatioTuple::new(4, vec![1]).is_err());
        assert!(RatioTuple::new(1, vec![]).is_err());
        assert!(RatioTuple::new(5, vec![1, 1]).is_err());
        assert!(RatioTuple::new(5, vec![3, 1]).is_err());
        assert!(RatioTuple::new(5, vec![1]).is_err());
        assert_eq!(RatioTuple::new(5, vec![2, 6]).unwrap().lattice_speeds(), &[1, 3]);
    }

    #[test]
    fn from_normalized_scales_to_integers() {
        let t = RatioTuple::from_normalized(7, &[rat(3, 2), rat(2, 1)]).unwrap();
        assert_eq!(t.lattice_speeds(), &[2, 3, 4]);
        assert_eq!(t.normalized(), vec![rat(1, 1), rat(3, 2), rat(2, 1)]);
        assert_eq!(t.r(), Some(rat(2, 3)));
        assert!(RatioTuple::from_normalized(5, &[rat(1, 1)]).is_err());
        assert!(RatioTuple::from_normalized(7, &[rat(3, 1), rat(2, 1)]).is_err());
    }

    #[test]
    fn q3_model_layout() {
        let m = VelocityModel::from_parts(RatioTuple::three(), 1.5f64.sqrt(), vec![2.0 / 3.0, 1.0 / 6.0]).unwrap();
        assert_eq!(m.velocities().len(), 3);
        assert_eq!(m.lattice_shifts(), vec![0, 1, -1]);
        assert_eq!(m.full_normalized_weights(), vec![2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]);
        assert!(m.is_valid());
        assert!(!m.has_ghosts());
        assert!(m.detect_ghosts(0.0).iter().all(|g| !g));
    }

    #[test]
    fn model_json_roundtrip_recomputes_residual() {
        let m = VelocityModel::from_parts(RatioTuple::three(), 1.5f64.sqrt(), vec![2.0 / 3.0, 1.0 / 6.0]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"weights_normalized\""));
        let back: VelocityModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
