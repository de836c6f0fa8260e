use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{RatioTuple, VelocityModel};
use crate::error::{Error, Result};

/// Sign choice in the closed-form five-velocity family.
///
/// `Plus` tends to the three-velocity model as `r → 0`: its outer pair
/// `±v₄` becomes a ghost. `Minus` is the smaller-`v₂` branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Q5Branch {
    Minus,
    Plus,
}

impl Q5Branch {
    fn sign(self) -> f64 {
        match self {
            Q5Branch::Minus => -1.0,
            Q5Branch::Plus => 1.0,
        }
    }
}

/// One branch of the closed-form five-velocity solution at `r = 1/p̄₄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormQ5 {
    pub branch: Q5Branch,
    pub r: f64,
    pub v2: f64,
    /// `w̄₁, w̄₂, w̄₄`
    pub weights: [f64; 3],
}

/// `9r⁴ − 42r² + 9`, whose square root is `χ`.
pub fn chi_squared(r: f64) -> f64 {
    let r2 = r * r;
    9.0 * r2 * r2 - 42.0 * r2 + 9.0
}

/// Both branches of the five-velocity family, `[Minus, Plus]`.
///
/// ```text
/// v₂  = √(3 + 3r² ± χ) / 2
/// w̄₂ = [9r⁴ − 27r² − 6 ∓ (3r² − 2)χ] / [300 r²(r² − 1)]
/// w̄₄ = [6r⁴ + 27r² − 9 ∓ (2r² − 3)χ] / [300 (r² − 1)]
/// ```
pub fn closed_form_q5(r: f64) -> Result<[ClosedFormQ5; 2]> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("r must lie in (0, 1), got {r}")));
    }
    let disc = chi_squared(r);
    if disc < 0.0 {
        return Err(Error::NoRealSolution(format!("9r⁴ − 42r² + 9 = {disc} < 0 at r = {r}")));
    }
    let chi = disc.sqrt();
    let r2 = r * r;
    let r4 = r2 * r2;
    let branch = |b: Q5Branch| {
        let s = b.sign();
        let v2 = (3.0 + 3.0 * r2 + s * chi).sqrt() / 2.0;
        let w2 = (9.0 * r4 - 27.0 * r2 - 6.0 - s * (3.0 * r2 - 2.0) * chi) / (300.0 * r2 * (r2 - 1.0));
        let w4 = (6.0 * r4 + 27.0 * r2 - 9.0 - s * (2.0 * r2 - 3.0) * chi) / (300.0 * (r2 - 1.0));
        ClosedFormQ5 { branch: b, r, v2, weights: [1.0 - 2.0 * w2 - 2.0 * w4, w2, w4] }
    };
    Ok([branch(Q5Branch::Minus), branch(Q5Branch::Plus)])
}

/// Closed-form branches as full models on the lattice `p̄₄ = 1/r`.
pub fn closed_form_q5_models(r: &BigRational) -> Result<[VelocityModel; 2]> {
    if r <= &BigRational::zero() || r >= &BigRational::one() {
        return Err(Error::InvalidArgument(format!("r must lie in (0, 1), got {r}")));
    }
    let ratios = RatioTuple::from_normalized(5, &[r.recip()])?;
    let [minus, plus] = closed_form_q5(r.to_f64().unwrap())?;
    let model = |c: ClosedFormQ5| VelocityModel::from_parts(ratios.clone(), c.v2, c.weights.to_vec());
    Ok([model(minus)?, model(plus)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_third_matches_known_speeds() {
        let [minus, plus] = closed_form_q5(1.0 / 3.0).unwrap();
        assert!((minus.v2 - 0.553432).abs() < 1e-6);
        assert!((plus.v2 - 1.166353).abs() < 1e-6);
        for b in [minus, plus] {
            let sum = b.weights[0] + 2.0 * b.weights[1] + 2.0 * b.weights[2];
            assert!((sum - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn complex_chi_is_rejected() {
        assert!(matches!(closed_form_q5(0.9), Err(Error::NoRealSolution(_))));
        assert!(matches!(closed_form_q5(0.5), Err(Error::NoRealSolution(_))));
        assert!(closed_form_q5(0.0).is_err());
        assert!(closed_form_q5(1.0).is_err());
    }

    #[test]
    fn plus_branch_tends_to_three_velocities() {
        let plus = closed_form_q5(0.01).unwrap()[1];
        assert!((plus.v2 - 1.5f64.sqrt()).abs() < 1e-3);
        assert!((plus.weights[1] - 1.0 / 6.0).abs() < 1e-3);
        assert!(plus.weights[2].abs() < 1e-3);
    }

    #[test]
    fn models_on_rational_lattice() {
        let [minus, plus] = closed_form_q5_models(&BigRational::new(1.into(), 3.into())).unwrap();
        assert_eq!(minus.ratios().lattice_speeds(), &[1, 3]);
        assert!(minus.is_valid() && plus.is_valid());
        assert!(plus.detect_ghosts(1e-3)[2] && !minus.detect_ghosts(1e-3)[2]);
    }
}
