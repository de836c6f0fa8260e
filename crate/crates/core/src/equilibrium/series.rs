//! Truncated power series in `(u, t)` whose coefficients are polynomials in
//! `v`, with exact rational coefficients.
//!
//! `u` carries weight 1 and `t` a configurable weight; a monomial
//! `vᶜ uᵃ tᵇ` survives truncation when `a·w_u + b·w_t ≤ order`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exponents `(v, u, t)`.
pub type Exponents = (u32, u32, u32);

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    terms: BTreeMap<Exponents, BigRational>,
    weight_t: u32,
    order: u32,
}

impl Series {
    pub fn zero(weight_t: u32, order: u32) -> Self {
        Self { terms: BTreeMap::new(), weight_t, order }
    }

    pub fn constant(c: BigRational, weight_t: u32, order: u32) -> Self {
        let mut s = Self::zero(weight_t, order);
        s.add_term((0, 0, 0), c);
        s
    }

    pub fn monomial(exps: Exponents, c: BigRational, weight_t: u32, order: u32) -> Self {
        let mut s = Self::zero(weight_t, order);
        s.add_term(exps, c);
        s
    }

    fn weight(&self, (_, a, b): Exponents) -> u32 {
        a + b * self.weight_t
    }

    pub fn add_term(&mut self, exps: Exponents, c: BigRational) {
        if c.is_zero() || self.weight(exps) > self.order {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, BigRational> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Exponents, BigRational> {
        self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.weight_t, self.order);
        for (&k, x) in &self.terms {
            out.add_term(k, x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.weight_t, self.order);
        for (&(v1, a1, b1), c1) in &self.terms {
            for (&(v2, a2, b2), c2) in &other.terms {
                out.add_term((v1 + v2, a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }

    /// `exp(self)` for a series without a `(u, t)`-constant part.
    pub fn exp(&self) -> Self {
        assert!(self.terms.keys().all(|&(_, a, b)| a + b > 0), "exp needs a series that vanishes at u = t = 0");
        let mut out = Self::constant(BigRational::one(), self.weight_t, self.order);
        let mut power = out.clone();
        // every factor raises the weight by at least one
        for k in 1..=self.order {
            power = power.mul(self).scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
            if power.terms.is_empty() {
                break;
            }
            out = out.add(&power);
        }
        out
    }

    /// `Σ_k binom(α, k) xᵏ` with `x = t/θ₀`, i.e. `(1 + t/θ₀)^α`.
    pub fn binomial_in_t(alpha: &BigRational, theta0: &BigRational, weight_t: u32, order: u32) -> Self {
        let mut out = Self::zero(weight_t, order);
        let mut coeff = BigRational::one();
        let mut k = 0u32;
        while k * weight_t <= order {
            out.add_term((0, 0, k), coeff.clone());
            let kk = BigRational::from_integer(k.into());
            coeff = coeff * (alpha - &kk) / (&kk + BigRational::one()) / theta0;
            k += 1;
        }
        out
    }

    /// `1/(θ₀ + t) = Σ_k (−1)ᵏ tᵏ / θ₀^{k+1}`.
    pub fn reciprocal_in_t(theta0: &BigRational, weight_t: u32, order: u32) -> Self {
        let mut out = Self::zero(weight_t, order);
        let mut coeff = theta0.recip();
        let mut k = 0u32;
        while k * weight_t <= order {
            out.add_term((0, 0, k), coeff.clone());
            coeff = -coeff / theta0;
            k += 1;
        }
        out
    }
}
