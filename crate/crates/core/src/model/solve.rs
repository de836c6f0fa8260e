use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use super::poly::{isolate_positive_roots, rational_root, refine_root, solve_exact, Polynomial, RootBracket};
use super::{RatioTuple, VelocityModel};
use crate::error::{Error, Result};
use crate::moments::gaussian_moment_coefficient;

const REFINE_BITS: u32 = 96;

/// The moment system of a ratio tuple reduced to one polynomial equation in
/// `s = v₂²`.
///
/// Writing the even-moment rows `n = 2, 4, …, q − 1` as `A·w = Γ(s)` with
/// `A_{kj} = p̄_j^{2k}` and `Γ_k = I(2k)/(2 s^k)`, the `n = q + 1` row
/// `p̄^{q+1}·w = I(q+1)/(2 s^{(q+1)/2})` becomes, after eliminating `w`,
/// `Σ_k c_k I(2k) s^{K+1−k} − I(q+1) = 0` with `c = p̄^{q+1} A⁻¹`.
/// Every `I(n)` is taken without its `√π` factor, so all coefficients are
/// rational.
#[derive(Debug, Clone)]
pub struct ModelPolynomial {
    ratios: RatioTuple,
    matrix: Vec<Vec<BigRational>>,
    closure: Vec<BigRational>,
    polynomial: Polynomial,
}

impl ModelPolynomial {
    pub fn ratios(&self) -> &RatioTuple {
        &self.ratios
    }

    /// Primitive integer-coefficient polynomial in `s`, lowest degree first.
    pub fn polynomial(&self) -> &Polynomial {
        &self.polynomial
    }

    /// `p̄^{q+1} A⁻¹`.
    pub fn closure_row(&self) -> &[BigRational] {
        &self.closure
    }

    /// Exact normalized weights `w̄₂, w̄₄, …` at a rational `s`.
    pub fn weights_at(&self, s: &BigRational) -> Vec<BigRational> {
        let two = BigRational::from_integer(2.into());
        let mut power = BigRational::one();
        let rhs = (1..=self.matrix.len() as u32)
            .map(|k| {
                power *= s;
                gaussian_moment_coefficient(2 * k) / (&two * &power)
            })
            .collect();
        solve_exact(self.matrix.clone(), rhs).expect("moment matrix checked non-singular")
    }

    /// Positive roots in `s`, ascending, each narrowed to a relative width
    /// of `2^{-96}`.
    pub fn root_brackets(&self) -> Vec<RootBracket> {
        isolate_positive_roots(&self.polynomial).iter().map(|b| refine_root(&self.polynomial, b, REFINE_BITS)).collect()
    }

    /// `s` and the normalized weights `w̄₁, w̄₂, …` exactly, when the root in
    /// `bracket` is rational.
    pub fn exact_branch(&self, bracket: &RootBracket) -> Option<(BigRational, Vec<BigRational>)> {
        let s = rational_root(&self.polynomial, bracket)?;
        let tail = self.weights_at(&s);
        let two = BigRational::from_integer(2.into());
        let w1 = tail.iter().fold(BigRational::one(), |acc, w| acc - &two * w);
        Some((s, std::iter::once(w1).chain(tail).collect()))
    }

    /// The model at the midpoint of a refined root bracket.
    pub fn model_at(&self, bracket: &RootBracket) -> Result<VelocityModel> {
        let s = bracket.midpoint();
        let tail = self.weights_at(&s);
        let two = BigRational::from_integer(2.into());
        let w1 = tail.iter().fold(BigRational::one(), |acc, w| acc - &two * w);
        let normalized = std::iter::once(w1).chain(tail).map(|w| w.to_f64().unwrap()).collect();
        let v2 = s.to_f64().unwrap().sqrt();
        VelocityModel::from_parts(self.ratios.clone(), v2, normalized)
    }
}

/// Builds the univariate polynomial whose positive roots are the admissible
/// `s = v₂²` for `ratios`.
pub fn build_polynomial(ratios: &RatioTuple) -> Result<ModelPolynomial> {
    let pbar = ratios.normalized();
    let k_max = pbar.len();
    let matrix: Vec<Vec<BigRational>> =
        (1..=k_max as i32).map(|k| pbar.iter().map(|p| Pow::pow(p, 2 * k)).collect()).collect();
    let row: Vec<BigRational> = pbar.iter().map(|p| Pow::pow(p, ratios.q() as i32 + 1)).collect();
    let transposed: Vec<Vec<BigRational>> =
        (0..k_max).map(|j| (0..k_max).map(|k| matrix[k][j].clone()).collect()).collect();
    let closure = solve_exact(transposed, row).ok_or(Error::SingularMatrix)?;

    // coefficient of s^{K+1−k} is c_k I(2k); constant term −I(2K+2)
    let mut coeffs = vec![BigRational::zero(); k_max + 1];
    coeffs[0] = -gaussian_moment_coefficient(2 * k_max as u32 + 2);
    for (idx, c) in closure.iter().enumerate() {
        let k = idx + 1;
        coeffs[k_max + 1 - k] += c * gaussian_moment_coefficient(2 * k as u32);
    }
    let polynomial = Polynomial::new(coeffs).primitive();
    Ok(ModelPolynomial { ratios: ratios.clone(), matrix, closure, polynomial })
}

/// Every model admitted by `ratios`, sorted by `v₂` ascending. An empty list
/// means the polynomial has no positive real root.
pub fn solve_model(ratios: &RatioTuple) -> Result<Vec<VelocityModel>> {
    let system = build_polynomial(ratios)?;
    system.root_brackets().iter().map(|b| system.model_at(b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{discrete_moment, gaussian_moment};

    fn ratios(q: usize, p: &[u64]) -> RatioTuple {
        RatioTuple::new(q, p.to_vec()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn q3_polynomial_root_is_three_halves() {
        let sys = build_polynomial(&RatioTuple::three()).unwrap();
        // s/2 − 3/4 → 2s − 3
        assert_eq!(sys.polynomial().integer_coefficients(), vec![(-3).into(), 2.into()]);
        assert_eq!(sys.polynomial().sign_at(&rat(3, 2)), 0);
        assert_eq!(sys.weights_at(&rat(3, 2)), vec![rat(1, 6)]);
    }

    #[test]
    fn q3_branch_is_exact() {
        let sys = build_polynomial(&RatioTuple::three()).unwrap();
        let brackets = sys.root_brackets();
        let (s, w) = sys.exact_branch(&brackets[0]).unwrap();
        assert_eq!(s, rat(3, 2));
        assert_eq!(w, vec![rat(2, 3), rat(1, 6)]);
        let q7 = build_polynomial(&ratios(7, &[1, 2, 3])).unwrap();
        assert!(q7.root_brackets().iter().all(|b| q7.exact_branch(b).is_none()));
    }

    #[test]
    fn q3_model() {
        let models = solve_model(&RatioTuple::three()).unwrap();
        assert_eq!(models.len(), 1);
        let m = &models[0];
        assert!((m.v2() - 1.5f64.sqrt()).abs() < 1e-15);
        assert!((m.normalized_weights()[1] - 1.0 / 6.0).abs() < 1e-16);
        assert!((m.normalized_weights()[0] - 2.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn q5_r_third_has_two_branches() {
        let models = solve_model(&ratios(5, &[1, 3])).unwrap();
        assert_eq!(models.len(), 2);
        assert!((models[0].v2() - 0.553432).abs() < 1e-6);
        // the outer weight of the faster branch is 2.6e-4
        assert!(models[0].detect_ghosts(1e-3).iter().all(|g| !g));
        assert_eq!(models[1].detect_ghosts(1e-3), vec![false, false, true]);
        assert!(!models[1].has_ghosts());
        for m in &models {
            assert!(m.all_positive());
            assert!(m.is_valid(), "residual {}", m.residual());
        }
    }

    #[test]
    fn q5_without_real_chi_has_no_model() {
        assert!(solve_model(&ratios(5, &[1, 2])).unwrap().is_empty());
    }

    #[test]
    fn published_models_regenerate() {
        let cases: [(&[u64], f64); 3] =
            [(&[1, 2, 3], 0.846393), (&[1, 2, 3, 4, 5], 0.685900), (&[1, 2, 3, 4, 5, 6, 7, 8, 9, 11], 0.372889)];
        for (p, v2) in cases {
            let models = solve_model(&ratios(2 * p.len() + 1, p)).unwrap();
            assert!(models.iter().any(|m| (m.v2() - v2).abs() < 1e-6), "{p:?}");
        }
    }

    #[test]
    fn moments_match_to_q_plus_one() {
        for m in solve_model(&ratios(11, &[1, 2, 3, 4, 5])).unwrap() {
            for n in 0..=12u32 {
                let exact = gaussian_moment(n).to_f64();
                let xi = discrete_moment(&m, n);
                if n % 2 == 1 {
                    assert_eq!(xi, 0.0);
                } else {
                    assert!(((xi - exact) / exact).abs() < 1e-9, "n = {n}");
                }
            }
        }
    }

    #[test]
    fn polynomial_degree_is_half_q_minus_one() {
        for (q, p) in [(3usize, vec![1u64]), (5, vec![1, 3]), (7, vec![1, 2, 3])] {
            let sys = build_polynomial(&ratios(q, &p)).unwrap();
            assert_eq!(sys.polynomial().degree(), Some(q / 2));
        }
    }
}
