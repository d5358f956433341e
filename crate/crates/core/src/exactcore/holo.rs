use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::multi_index::MultiIndex;
use super::rational::CplxRat;
use crate::error::{Error, Result};

/// Sparse holomorphic polynomial in n variables with Gaussian-rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoloPoly {
    n: usize,
    terms: BTreeMap<MultiIndex, CplxRat>,
}

impl HoloPoly {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: CplxRat) -> Self {
        Self::monomial(MultiIndex::zero(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, CplxRat::one())
    }

    pub fn monomial(alpha: MultiIndex, c: CplxRat) -> Self {
        let n = alpha.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(alpha, c);
        }
        Self { n, terms }
    }

    /// The coordinate function z_i.
    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(n, i), CplxRat::one())
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, CplxRat)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (alpha, c) in terms {
            if alpha.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: alpha.dim(),
                });
            }
            p.add_term(alpha, &c);
        }
        Ok(p)
    }

    /// 1 + a·z.
    pub fn affine_one_plus(a: &[CplxRat]) -> Self {
        let n = a.len();
        let mut p = Self::one(n);
        for (i, ai) in a.iter().enumerate() {
            p.add_term(MultiIndex::unit(n, i), ai);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, CplxRat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> CplxRat {
        self.terms.get(alpha).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> CplxRat {
        self.coeff(&MultiIndex::zero(self.n))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    /// Degree with the convention deg 0 = -1.
    pub fn degree_i64(&self) -> i64 {
        self.degree().map_or(-1, i64::from)
    }

    pub fn is_constant(&self) -> bool {
        self.degree().map_or(true, |d| d == 0)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: &CplxRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(alpha);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (alpha, c) in &other.terms {
            out.add_term(alpha.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (alpha, c) in &other.terms {
            out.add_term(alpha.clone(), &-c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.add(b), &(ca * cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &CplxRat) -> Self {
        let mut out = Self::zero(self.n);
        for (alpha, coeff) in &self.terms {
            out.add_term(alpha.clone(), &(coeff * c));
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| a.degree() == d)
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, z: &[CplxRat]) -> CplxRat {
        let mut acc = CplxRat::zero();
        for (alpha, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in alpha.exponents().iter().enumerate() {
                if e > 0 {
                    term = &term * &z[i].pow(e);
                }
            }
            acc += &term;
        }
        acc
    }

    pub fn eval_f64(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(alpha, c)| c.to_complex64() * monomial_f64(alpha, z))
            .sum()
    }

    /// Σ |c_α|·|z^α|, the scale used by pole-proximity guards.
    pub fn magnitude_f64(&self, z: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(alpha, c)| c.to_complex64().norm() * monomial_f64(alpha, z).norm())
            .sum()
    }

    /// Σ |c_α|, a coefficient magnitude bound.
    pub fn coefficient_mass(&self) -> f64 {
        self.terms.values().map(|c| c.to_complex64().norm()).sum()
    }

    /// Substitutes z ↦ r·z, multiplying each coefficient by r^|α|.
    pub fn dilate(&self, r: &BigRational) -> Self {
        let mut out = Self::zero(self.n);
        for (alpha, c) in &self.terms {
            let factor = num_traits::pow(r.clone(), alpha.degree() as usize);
            out.add_term(alpha.clone(), &c.scale(&factor));
        }
        out
    }

    /// Exact substitution z ↦ z + c.
    pub fn shift(&self, c: &[CplxRat]) -> Self {
        let n = self.n;
        let shifted_vars: Vec<HoloPoly> = (0..n)
            .map(|i| {
                let mut v = Self::var(n, i);
                v.add_term(MultiIndex::zero(n), &c[i]);
                v
            })
            .collect();
        let mut out = Self::zero(n);
        for (alpha, coeff) in &self.terms {
            let mut term = Self::constant(n, coeff.clone());
            for (i, &e) in alpha.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.mul(&shifted_vars[i].pow(e));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Restriction to the complex line z = base + s·direction, as a
    /// univariate polynomial in s (coefficients low to high).
    pub fn restrict_to_line(&self, base: &[CplxRat], direction: &[CplxRat]) -> Vec<CplxRat> {
        let n = self.n;
        let line_vars: Vec<Vec<CplxRat>> = (0..n)
            .map(|i| vec![base[i].clone(), direction[i].clone()])
            .collect();
        let mut out: Vec<CplxRat> = Vec::new();
        for (alpha, coeff) in &self.terms {
            let mut term = vec![coeff.clone()];
            for (i, &e) in alpha.exponents().iter().enumerate() {
                for _ in 0..e {
                    term = univariate_mul(&term, &line_vars[i]);
                }
            }
            if out.len() < term.len() {
                out.resize(term.len(), CplxRat::zero());
            }
            for (k, c) in term.iter().enumerate() {
                out[k] += c;
            }
        }
        while out.last().map_or(false, Zero::is_zero) {
            out.pop();
        }
        out
    }
}

fn univariate_mul(a: &[CplxRat], b: &[CplxRat]) -> Vec<CplxRat> {
    let mut out = vec![CplxRat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    out
}

pub(crate) fn monomial_f64(alpha: &MultiIndex, z: &[Complex64]) -> Complex64 {
    alpha
        .exponents()
        .iter()
        .zip(z)
        .filter(|(e, _)| **e > 0)
        .map(|(&e, zi)| zi.powu(e))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rational::rat;

    #[test]
    fn shift_binomial() {
        // (z₁)² shifted by (1, 0) is z₁² + 2z₁ + 1.
        let p = HoloPoly::monomial(MultiIndex::new(vec![2, 0]), CplxRat::one());
        let s = p.shift(&[CplxRat::one(), CplxRat::zero()]);
        let expected = HoloPoly::from_terms(
            2,
            [
                (MultiIndex::new(vec![2, 0]), CplxRat::one()),
                (MultiIndex::new(vec![1, 0]), CplxRat::from_ints(2, 0)),
                (MultiIndex::new(vec![0, 0]), CplxRat::one()),
            ],
        )
        .unwrap();
        assert_eq!(s, expected);
        let back = s.shift(&[-CplxRat::one(), CplxRat::zero()]);
        assert_eq!(back, p);
    }

    #[test]
    fn dilation_scales_by_degree() {
        let q = HoloPoly::affine_one_plus(&[CplxRat::real(rat(1, 8)), CplxRat::zero()]);
        let d = q.dilate(&rat(2, 1));
        assert_eq!(d.coeff(&MultiIndex::new(vec![1, 0])), CplxRat::real(rat(1, 4)));
        assert_eq!(d.constant_term(), CplxRat::one());
    }

    #[test]
    fn line_restriction_matches_evaluation() {
        let p = HoloPoly::var(2, 0).mul(&HoloPoly::var(2, 1)).add(&HoloPoly::one(2));
        let base = [CplxRat::from_ints(1, 0), CplxRat::from_ints(0, 1)];
        let dir = [CplxRat::from_ints(2, 1), CplxRat::from_ints(-1, 0)];
        let coeffs = p.restrict_to_line(&base, &dir);
        let s = CplxRat::real(rat(3, 7));
        let mut via_line = CplxRat::zero();
        for c in coeffs.iter().rev() {
            via_line = &(&via_line * &s) + c;
        }
        let point: Vec<CplxRat> = base.iter().zip(&dir).map(|(b, d)| b + &(d * &s)).collect();
        assert_eq!(via_line, p.eval(&point));
    }
}
