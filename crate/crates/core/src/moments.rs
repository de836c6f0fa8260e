//! Gaussian and Maxwell-Boltzmann moments, exact where possible.
//!
//! Every Gaussian integral `∫ vⁿ exp(−v²) dv` is a rational multiple of
//! `√π`, so those values are carried as [`SqrtPiRational`] and only turned
//! into floating point at the very end.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::VelocityModel;

pub const SQRT_PI: f64 = 1.772_453_850_905_516;

/// An exact value `coefficient × √π`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SqrtPiRational {
    coefficient: BigRational,
}

impl SqrtPiRational {
    pub fn new(coefficient: BigRational) -> Self {
        // Ratio keeps itself reduced with a positive denominator.
        Self { coefficient }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero())
    }

    pub fn coefficient(&self) -> &BigRational {
        &self.coefficient
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.coefficient.to_f64().unwrap_or(f64::NAN) * SQRT_PI
    }
}

impl fmt::Display for SqrtPiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})√π", self.coefficient)
    }
}

/// `(n − 1)!! / 2^{n/2}` for even `n`, zero for odd `n`: the Gaussian moment
/// divided by `√π`.
pub fn gaussian_moment_coefficient(n: u32) -> BigRational {
    if n % 2 == 1 {
        return BigRational::zero();
    }
    let mut num = BigInt::one();
    let mut k = n as i64 - 1;
    while k > 1 {
        num *= k;
        k -= 2;
    }
    BigRational::new(num, BigInt::one() << (n / 2) as usize)
}

/// `∫ vⁿ exp(−v²) dv` over the real line.
pub fn gaussian_moment(n: u32) -> SqrtPiRational {
    SqrtPiRational::new(gaussian_moment_coefficient(n))
}

/// Exact coefficients of the `m`-th raw moment of the unit-density 1-D
/// Maxwell-Boltzmann density `(πθ)^{−1/2} exp(−(V − U)²/θ)`.
///
/// Entry `(a, b, c)` means `c · Uᵃ θᵇ`; the moment is the sum over entries.
/// Substituting `V = U + √θ w` gives
/// `Σ_k C(m, k) U^{m−k} θ^{k/2} I(k)/√π` with only even `k` surviving.
pub fn mb_moment_terms(m: u32) -> Vec<(u32, u32, BigRational)> {
    let mut terms = Vec::new();
    let mut binom = BigInt::one();
    for k in 0..=m {
        if k > 0 {
            binom = binom * BigInt::from(m - k + 1) / BigInt::from(k);
        }
        if k % 2 == 0 {
            let c = BigRational::from_integer(binom.clone()) * gaussian_moment_coefficient(k);
            terms.push((m - k, k / 2, c));
        }
    }
    terms
}

/// `m`-th raw moment `∫ Vᵐ f^{eq}(V) dV` of the Maxwell-Boltzmann
/// distribution with density `rho`, velocity `velocity` and temperature
/// `theta`, using the lab-frame velocity with reference temperature 1.
pub fn mb_moment(m: u32, rho: f64, velocity: f64, theta: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::InvalidArgument(format!("density must be positive, got {rho}")));
    }
    if !(theta > 0.0) {
        return Err(Error::InvalidArgument(format!("temperature must be positive, got {theta}")));
    }
    let sum: f64 = mb_moment_terms(m)
        .into_iter()
        .map(|(a, b, c)| c.to_f64().unwrap() * velocity.powi(a as i32) * theta.powi(b as i32))
        .sum();
    Ok(rho * sum)
}

/// `Ξ(n) = Σ_i w_i v_iⁿ` over the full symmetric velocity set.
///
/// The `±v` partners are summed in pairs so odd moments cancel exactly.
pub fn discrete_moment(model: &VelocityModel, n: u32) -> f64 {
    let weights = model.weights();
    let mut sum = if n == 0 { weights[0] } else { 0.0 };
    for (v, w) in model.positive_velocities().zip(&weights[1..]) {
        let up = v.powi(n as i32);
        let down = if n % 2 == 1 { -up } else { up };
        sum += w * (up + down);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gaussian_moment_values() {
        assert_eq!(gaussian_moment(0).coefficient(), &rat(1, 1));
        assert!(gaussian_moment(1).is_zero());
        assert_eq!(gaussian_moment(4).coefficient(), &rat(3, 4));
        assert_eq!(gaussian_moment(6).coefficient(), &rat(15, 8));
        assert_relative_eq!(gaussian_moment(0).to_f64(), std::f64::consts::PI.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn gaussian_recurrence_is_exact() {
        for n in 2..60u32 {
            let lhs = gaussian_moment_coefficient(n);
            let rhs = gaussian_moment_coefficient(n - 2) * rat(n as i64 - 1, 2);
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn sqrt_pi_rational_to_f64() {
        let x = SqrtPiRational::new(rat(105, 16));
        assert_relative_eq!(x.to_f64(), 105.0 / 16.0 * std::f64::consts::PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn mb_moment_closed_forms() {
        assert_eq!(mb_moment(0, 1.0, 0.0, 1.0).unwrap(), 1.0);
        assert_relative_eq!(mb_moment(2, 1.0, 0.0, 1.0).unwrap(), 0.5);
        assert_relative_eq!(mb_moment(4, 1.0, 0.0, 1.0).unwrap(), 0.75);
        assert_relative_eq!(mb_moment(1, 2.0, 0.3, 1.0).unwrap(), 0.6, max_relative = 1e-15);
        let (r, u, t) = (1.3, -0.4, 0.7);
        assert_relative_eq!(mb_moment(2, r, u, t).unwrap(), r * (u * u + t / 2.0), max_relative = 1e-14);
        assert_relative_eq!(mb_moment(3, r, u, t).unwrap(), r * (u.powi(3) + 1.5 * u * t), max_relative = 1e-14);
        assert_relative_eq!(
            mb_moment(4, r, u, t).unwrap(),
            r * (u.powi(4) + 3.0 * u * u * t + 0.75 * t * t),
            max_relative = 1e-14
        );
    }

    #[test]
    fn mb_moment_rejects_bad_state() {
        assert!(mb_moment(2, 1.0, 0.0, 0.0).is_err());
        assert!(mb_moment(2, 0.0, 0.0, 1.0).is_err());
        assert!(mb_moment(2, 1.0, 0.0, f64::NAN).is_err());
    }
}
