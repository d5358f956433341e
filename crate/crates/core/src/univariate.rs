//! Dense univariate polynomials over an exact field.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactcore::CplxRat;

pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
}

impl Field for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl Field for CplxRat {
    fn from_i64(v: i64) -> Self {
        CplxRat::real(BigRational::from_integer(BigInt::from(v)))
    }
}

/// Coefficients stored low degree first; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly1<F> {
    coeffs: Vec<F>,
}

pub type RatPoly = Poly1<BigRational>;
/// Polynomial in a real parameter with Gaussian-rational coefficients.
pub type GaussPoly = Poly1<CplxRat>;

impl<F: Field> Poly1<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate itself.
    pub fn x() -> Self {
        Self::new(vec![F::zero(), F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => {
                let inv = F::one() / l.clone();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl<F: Field> Zero for Poly1<F> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<F: Field> One for Poly1<F> {
    fn one() -> Self {
        Self::constant(F::one())
    }
}

impl<F: Field> Add for Poly1<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<F: Field> Sub for Poly1<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<F: Field> Mul for Poly1<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl<F: Field> Neg for Poly1<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl RatPoly {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_i64(c)).collect())
    }

    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let v = self.eval(x);
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    }

    /// p / gcd(p, p′).
    pub fn square_free(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().map_or(true, |d| d == 0) {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    /// Integer coefficients with unit content and the same roots.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if content.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &content).collect()
    }

    /// Bound B with every real root in (-B, B).
    pub fn cauchy_bound(&self) -> BigRational {
        let lead = self.lead().expect("nonzero polynomial").abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / lead.clone())
            .max()
            .unwrap_or_else(BigRational::zero);
        max + BigRational::one()
    }

    /// p₀ = p, p₁ = p′, p_{k+1} = −rem(p_{k−1}, p_k).
    pub fn sturm_chain(&self) -> Vec<RatPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let len = chain.len();
            if chain[len - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[len - 2].div_rem(&chain[len - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(-r);
        }
        chain
    }
}

/// Sign variations of a Sturm chain at x, zeros skipped.
pub fn sign_variations(chain: &[RatPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0;
    for p in chain {
        let s = p.sign_at(x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

impl GaussPoly {
    pub fn re_part(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c.re.clone()).collect())
    }

    pub fn im_part(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c.im.clone()).collect())
    }

    pub fn eval_real(&self, t: &BigRational) -> CplxRat {
        self.eval(&CplxRat::real(t.clone()))
    }

    pub fn from_rat_poly(p: &RatPoly) -> Self {
        Self::new(p.coeffs.iter().cloned().map(CplxRat::real).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rat;

    #[test]
    fn division_identity() {
        let a = RatPoly::from_ints(&[3, 0, -2, 5, 1]);
        let b = RatPoly::from_ints(&[1, 2, 3]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q * b.clone() + r.clone(), a);
        assert!(r.degree().unwrap_or(0) < b.degree().unwrap());
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f = RatPoly::from_ints(&[-1, 1]); // t - 1
        let a = f.clone() * RatPoly::from_ints(&[2, 1]);
        let b = f.clone() * RatPoly::from_ints(&[-3, 0, 1]);
        assert_eq!(a.gcd(&b), f);
    }

    #[test]
    fn square_free_part() {
        let p = RatPoly::from_ints(&[-1, 1]) * RatPoly::from_ints(&[-1, 1]) * RatPoly::from_ints(&[2, 1]);
        let s = p.square_free();
        assert_eq!(s.degree(), Some(2));
        assert!(s.eval(&rat(1, 1)).is_zero());
    }

    #[test]
    fn sturm_counts_roots() {
        // (t-1)(t-2)(t+3) has two roots in (0, 4].
        let p = RatPoly::from_ints(&[-1, 1]) * RatPoly::from_ints(&[-2, 1]) * RatPoly::from_ints(&[3, 1]);
        let chain = p.sturm_chain();
        let v0 = sign_variations(&chain, &rat(0, 1));
        let v4 = sign_variations(&chain, &rat(4, 1));
        assert_eq!(v0 - v4, 2);
    }

    #[test]
    fn primitive_form() {
        let p = RatPoly::new(vec![rat(1, 2), rat(-3, 4), rat(1, 4)]);
        let ints = p.primitive_integer();
        assert_eq!(ints, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(1)]);
    }
}
