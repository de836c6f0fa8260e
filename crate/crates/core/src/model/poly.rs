//! Exact univariate polynomials over the rationals and real-root isolation
//! by Sturm sequences.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense polynomial with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(coeffs: I) -> Self {
        Self::new(coeffs.into_iter().map(|c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap())
    }

    /// Sign of `p(x)` as -1, 0 or 1.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(k.into())).collect(),
        )
    }

    /// Euclidean division, `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / &lead;
            for (k, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + k] -= &factor * c;
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => Self::new(self.coeffs.iter().map(|c| c / l).collect()),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same roots, each simple.
    pub fn square_free(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    /// Scales to integer coefficients with unit content and a positive
    /// leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
        let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            content = -content;
        }
        Self::new(ints.into_iter().map(|c| BigRational::from_integer(c / &content)).collect())
    }

    /// Integer coefficients of [`Polynomial::primitive`].
    pub fn integer_coefficients(&self) -> Vec<BigInt> {
        self.primitive().coeffs.iter().map(|c| c.to_integer()).collect()
    }

    /// Upper bound on the modulus of every root (Cauchy).
    pub fn root_bound(&self) -> BigRational {
        let lead = self.leading().expect("zero polynomial has no root bound").abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
        max + BigRational::one()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", c.abs())?,
                1 => write!(f, "{}·s", c.abs())?,
                _ => write!(f, "{}·s^{}", c.abs(), k)?,
            }
        }
        Ok(())
    }
}

/// Sturm sequence of a square-free polynomial.
pub struct SturmChain {
    chain: Vec<Polynomial>,
}

impl SturmChain {
    pub fn new(p: &Polynomial) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(Polynomial::new(r.coeffs.into_iter().map(|c| -c).collect()));
        }
        Self { chain }
    }

    pub fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_roots(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

/// Closed interval `[lo, hi]` known to contain exactly one real root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootBracket {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootBracket {
    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap()
    }
}

/// Brackets for every distinct real root of `p` in `(0, ∞)`, ascending.
pub fn isolate_positive_roots(p: &Polynomial) -> Vec<RootBracket> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sf = p.square_free();
    let sturm = SturmChain::new(&sf);
    let two = BigRational::from_integer(2.into());
    let mut found = Vec::new();
    let mut stack = vec![(BigRational::zero(), sf.root_bound())];
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count_roots(&lo, &hi) {
            0 => {}
            1 => {
                if sf.sign_at(&hi) == 0 {
                    found.push(RootBracket { lo: hi.clone(), hi });
                } else {
                    found.push(RootBracket { lo, hi });
                }
            }
            _ => {
                let mid = (&lo + &hi) / &two;
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    found.sort_by(|a, b| a.lo.cmp(&b.lo));
    found
}

/// Shrinks `bracket` by exact bisection until its width is at most
/// `2^{-bits}` relative to its upper end.
pub fn refine_root(p: &Polynomial, bracket: &RootBracket, bits: u32) -> RootBracket {
    let sf = p.square_free();
    let two = BigRational::from_integer(2.into());
    let mut lo = bracket.lo.clone();
    let mut hi = bracket.hi.clone();
    if lo == hi {
        return RootBracket { lo, hi };
    }
    let scale = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
    let mut sign_lo = sf.sign_at(&lo);
    if sign_lo == 0 {
        return RootBracket { lo: lo.clone(), hi: lo };
    }
    while (&hi - &lo) > hi.abs() * &scale {
        let mid = (&lo + &hi) / &two;
        match sf.sign_at(&mid) {
            0 => return RootBracket { lo: mid.clone(), hi: mid },
            s if s == sign_lo => {
                lo = mid;
                sign_lo = s;
            }
            _ => hi = mid,
        }
    }
    RootBracket { lo, hi }
}

/// The root inside `bracket` as an exact rational, if it is one whose
/// denominator is small enough to show up among the continued-fraction
/// convergents of the bracket midpoint.
pub fn rational_root(p: &Polynomial, bracket: &RootBracket) -> Option<BigRational> {
    if bracket.lo == bracket.hi {
        return (p.sign_at(&bracket.lo) == 0).then(|| bracket.lo.clone());
    }
    let mut x = bracket.midpoint();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    for _ in 0..64 {
        let a = x.floor().to_integer();
        (h0, h1) = (h1.clone(), &a * &h1 + h0);
        (k0, k1) = (k1.clone(), &a * &k1 + k0);
        let c = BigRational::new(h1.clone(), k1.clone());
        if c >= bracket.lo && c <= bracket.hi && p.sign_at(&c) == 0 {
            return Some(c);
        }
        let frac = &x - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
    }
    None
}

/// Solves `a·x = b` exactly by Gaussian elimination. Returns `None` when the
/// matrix is singular.
pub fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = &a[row][col] / &a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            for (target, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *target -= &factor * p;
            }
            let delta = &factor * &b[col];
            b[row] -= delta;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc -= &a[row][k] * &x[k];
        }
        x[row] = acc / &a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_roots_are_recovered() {
        // (3s − 1)(s² − 2)
        let p = Polynomial::from_integers([2, -6, -1, 3]);
        let roots: Vec<_> = isolate_positive_roots(&p).iter().map(|b| refine_root(&p, b, 80)).collect();
        assert_eq!(roots.len(), 2);
        assert_eq!(rational_root(&p, &roots[0]), Some(rat(1, 3)));
        assert_eq!(rational_root(&p, &roots[1]), None);
    }

    #[test]
    fn division_identity() {
        let a = Polynomial::from_integers([-5, 3, 0, 2, 7]);
        let b = Polynomial::from_integers([1, -2, 3]);
        let (q, r) = a.div_rem(&b);
        assert!(r.degree().unwrap() < 2);
        let back: Vec<BigRational> = {
            let mut v = vec![BigRational::zero(); 5];
            for (i, qc) in q.coefficients().iter().enumerate() {
                for (j, bc) in b.coefficients().iter().enumerate() {
                    v[i + j] += qc * bc;
                }
            }
            for (i, rc) in r.coefficients().iter().enumerate() {
                v[i] += rc;
            }
            v
        };
        assert_eq!(Polynomial::new(back), a);
    }

    #[test]
    fn square_free_removes_repeated_factor() {
        // (s - 1)^2 (s - 3)
        let p = Polynomial::from_integers([-3, 7, -5, 1]);
        let sf = p.square_free();
        assert_eq!(sf.degree(), Some(2));
        assert_eq!(sf.sign_at(&rat(1, 1)), 0);
        assert_eq!(sf.sign_at(&rat(3, 1)), 0);
    }

    #[test]
    fn isolates_positive_roots_only() {
        // (s + 2)(s - 1/2)(s - 3)
        let p = Polynomial::new(vec![rat(3, 1), rat(-11, 2), rat(-3, 2), rat(1, 1)]);
        let roots = isolate_positive_roots(&p);
        assert_eq!(roots.len(), 2);
        let r0 = refine_root(&p, &roots[0], 60).to_f64();
        let r1 = refine_root(&p, &roots[1], 60).to_f64();
        assert!((r0 - 0.5).abs() < 1e-15);
        assert!((r1 - 3.0).abs() < 1e-15);
    }

    #[test]
    fn close_roots_are_separated() {
        // (s - 1)(s - 1 - 1e-9)
        let e = rat(1, 1_000_000_000);
        let one = rat(1, 1);
        let p = Polynomial::new(vec![&one * (&one + &e), -(&one + &one + &e), one.clone()]);
        assert_eq!(isolate_positive_roots(&p).len(), 2);
    }

    #[test]
    fn primitive_has_unit_content() {
        let p = Polynomial::new(vec![rat(-3, 4), rat(1, 2)]);
        let ints = p.integer_coefficients();
        assert_eq!(ints, vec![BigInt::from(-3), BigInt::from(2)]);
    }

    #[test]
    fn exact_solve_and_singular() {
        let a = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(1, 1), rat(4, 1)]];
        let x = solve_exact(a, vec![rat(2, 1), rat(5, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(1, 1)]);
        let singular = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]];
        assert!(solve_exact(singular, vec![rat(1, 1), rat(2, 1)]).is_none());
    }
}
