use std::borrow::Cow;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::holo::HoloPoly;
use super::rational::{rat_to_f64, CplxRat};
use crate::error::{Error, Result};

/// Relative threshold below which a denominator value counts as a pole.
pub const POLE_TOLERANCE: f64 = 1e-14;

/// Vector-valued polynomial map ℂⁿ → ℂᴺ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    n: usize,
    components: Vec<HoloPoly>,
}

impl PolyMap {
    pub fn new(n: usize, components: Vec<HoloPoly>) -> Result<Self> {
        for c in &components {
            if c.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.n(),
                });
            }
        }
        Ok(Self { n, components })
    }

    /// z ↦ z.
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            components: (0..n).map(|i| HoloPoly::var(n, i)).collect(),
        }
    }

    /// N explicit zero components.
    pub fn zero(n: usize, target_dim: usize) -> Self {
        Self {
            n,
            components: vec![HoloPoly::zero(n); target_dim],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[HoloPoly] {
        &self.components
    }

    pub fn degree(&self) -> i64 {
        self.components.iter().map(HoloPoly::degree_i64).max().unwrap_or(-1)
    }

    pub fn to_weighted(&self) -> WeightedMap {
        WeightedMap {
            n: self.n,
            entries: self
                .components
                .iter()
                .map(|p| WeightedEntry {
                    weight: BigRational::one(),
                    poly: p.clone(),
                })
                .collect(),
        }
    }

    pub fn shift(&self, c: &[CplxRat]) -> Self {
        Self {
            n: self.n,
            components: self.components.iter().map(|p| p.shift(c)).collect(),
        }
    }
}

/// One component √weight · poly of a [`WeightedMap`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedEntry {
    pub weight: BigRational,
    pub poly: HoloPoly,
}

/// Polynomial map whose j-th component is √(weight_j)·poly_j. Only the
/// squared weights are stored, so squared norms stay rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedMap {
    n: usize,
    entries: Vec<WeightedEntry>,
}

impl WeightedMap {
    pub fn new(n: usize, entries: Vec<WeightedEntry>) -> Result<Self> {
        for e in &entries {
            if !e.weight.is_positive() {
                return Err(Error::NonPositive { what: "weight" });
            }
            if e.poly.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: e.poly.n(),
                });
            }
        }
        Ok(Self { n, entries })
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (BigRational, HoloPoly)>) -> Result<Self> {
        Self::new(
            n,
            pairs
                .into_iter()
                .map(|(weight, poly)| WeightedEntry { weight, poly })
                .collect(),
        )
    }

    /// The constant map √value.
    pub fn constant_sqrt(n: usize, value: BigRational) -> Result<Self> {
        Self::from_pairs(n, [(value, HoloPoly::one(n))])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn target_dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[WeightedEntry] {
        &self.entries
    }

    pub fn degree(&self) -> i64 {
        self.entries
            .iter()
            .map(|e| e.poly.degree_i64())
            .max()
            .unwrap_or(-1)
    }

    pub fn eval_f64(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.entries
            .iter()
            .map(|e| e.poly.eval_f64(z) * rat_to_f64(&e.weight).sqrt())
            .collect()
    }

    /// Multiplies every weight by `factor` (which must be positive).
    pub fn scale_weights(&self, factor: &BigRational) -> Result<Self> {
        if !factor.is_positive() {
            return Err(Error::NonPositive { what: "weight factor" });
        }
        Ok(Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|e| WeightedEntry {
                    weight: &e.weight * factor,
                    poly: e.poly.clone(),
                })
                .collect(),
        })
    }

    pub fn dilate(&self, r: &BigRational) -> Self {
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|e| WeightedEntry {
                    weight: e.weight.clone(),
                    poly: e.poly.dilate(r),
                })
                .collect(),
        }
    }

    pub fn shift(&self, c: &[CplxRat]) -> Self {
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|e| WeightedEntry {
                    weight: e.weight.clone(),
                    poly: e.poly.shift(c),
                })
                .collect(),
        }
    }

    /// Homogeneous degree-d part of every component.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|e| WeightedEntry {
                    weight: e.weight.clone(),
                    poly: e.poly.homogeneous_part(d),
                })
                .collect(),
        }
    }

    /// Applies a permutation of components: result[k] = self[perm[k]].
    pub fn permute(&self, perm: &[usize]) -> Self {
        Self {
            n: self.n,
            entries: perm.iter().map(|&k| self.entries[k].clone()).collect(),
        }
    }

    /// Multiplies component k by the unimodular Gaussian integer phase[k].
    pub fn with_phases(&self, phases: &[CplxRat]) -> Self {
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(phases)
                .map(|(e, ph)| WeightedEntry {
                    weight: e.weight.clone(),
                    poly: e.poly.scale(ph),
                })
                .collect(),
        }
    }
}

/// Anything that can be viewed as a weighted polynomial map.
pub trait WeightedView {
    fn source_dim(&self) -> usize;
    fn weighted(&self) -> Cow<'_, WeightedMap>;
}

impl WeightedView for WeightedMap {
    fn source_dim(&self) -> usize {
        self.n
    }
    fn weighted(&self) -> Cow<'_, WeightedMap> {
        Cow::Borrowed(self)
    }
}

impl WeightedView for PolyMap {
    fn source_dim(&self) -> usize {
        self.n
    }
    fn weighted(&self) -> Cow<'_, WeightedMap> {
        Cow::Owned(self.to_weighted())
    }
}

impl WeightedView for HoloPoly {
    fn source_dim(&self) -> usize {
        self.n()
    }
    fn weighted(&self) -> Cow<'_, WeightedMap> {
        Cow::Owned(WeightedMap {
            n: self.n(),
            entries: vec![WeightedEntry {
                weight: BigRational::one(),
                poly: self.clone(),
            }],
        })
    }
}

/// Numerator of a rational map: plain or weighted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Numerator {
    Poly(PolyMap),
    Weighted(WeightedMap),
}

impl Numerator {
    pub fn n(&self) -> usize {
        match self {
            Numerator::Poly(p) => p.n(),
            Numerator::Weighted(w) => w.n(),
        }
    }

    pub fn target_dim(&self) -> usize {
        match self {
            Numerator::Poly(p) => p.target_dim(),
            Numerator::Weighted(w) => w.target_dim(),
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            Numerator::Poly(p) => p.degree(),
            Numerator::Weighted(w) => w.degree(),
        }
    }

    pub fn polys(&self) -> Vec<&HoloPoly> {
        match self {
            Numerator::Poly(p) => p.components().iter().collect(),
            Numerator::Weighted(w) => w.entries().iter().map(|e| &e.poly).collect(),
        }
    }

    pub fn eval_f64(&self, z: &[Complex64]) -> Vec<Complex64> {
        match self {
            Numerator::Poly(p) => p.components().iter().map(|c| c.eval_f64(z)).collect(),
            Numerator::Weighted(w) => w.eval_f64(z),
        }
    }
}

impl WeightedView for Numerator {
    fn source_dim(&self) -> usize {
        self.n()
    }
    fn weighted(&self) -> Cow<'_, WeightedMap> {
        match self {
            Numerator::Poly(p) => Cow::Owned(p.to_weighted()),
            Numerator::Weighted(w) => Cow::Borrowed(w),
        }
    }
}

impl From<PolyMap> for Numerator {
    fn from(p: PolyMap) -> Self {
        Numerator::Poly(p)
    }
}

impl From<WeightedMap> for Numerator {
    fn from(w: WeightedMap) -> Self {
        Numerator::Weighted(w)
    }
}

/// Quotient p/q of a vector-valued polynomial by a scalar polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    numerator: Numerator,
    denominator: HoloPoly,
    reduced_claimed: bool,
}

impl RationalMap {
    pub fn new(numerator: impl Into<Numerator>, denominator: HoloPoly, reduced_claimed: bool) -> Result<Self> {
        let numerator = numerator.into();
        if denominator.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if denominator.n() != numerator.n() {
            return Err(Error::DimensionMismatch {
                expected: numerator.n(),
                found: denominator.n(),
            });
        }
        Ok(Self {
            numerator,
            denominator,
            reduced_claimed,
        })
    }

    /// A polynomial map viewed as p/1.
    pub fn polynomial(numerator: impl Into<Numerator>) -> Self {
        let numerator = numerator.into();
        let n = numerator.n();
        Self {
            numerator,
            denominator: HoloPoly::one(n),
            reduced_claimed: true,
        }
    }

    pub fn n(&self) -> usize {
        self.numerator.n()
    }

    pub fn target_dim(&self) -> usize {
        self.numerator.target_dim()
    }

    pub fn numerator(&self) -> &Numerator {
        &self.numerator
    }

    pub fn denominator(&self) -> &HoloPoly {
        &self.denominator
    }

    pub fn reduced_claimed(&self) -> bool {
        self.reduced_claimed
    }

    /// max(deg p, deg q).
    pub fn degree(&self) -> i64 {
        self.numerator.degree().max(self.denominator.degree_i64())
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.is_constant()
    }

    pub fn require_denominator_nonzero_at_origin(&self) -> Result<()> {
        if self.denominator.constant_term().is_zero() {
            Err(Error::DenominatorVanishesAtOrigin)
        } else {
            Ok(())
        }
    }

    /// Componentwise value p(z)/q(z) in floating point.
    pub fn eval_float(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        if z.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: z.len(),
            });
        }
        let q = self.denominator.eval_f64(z);
        let scale = self.denominator.magnitude_f64(z).max(1.0);
        if q.norm() < POLE_TOLERANCE * scale {
            return Err(Error::PoleProximity { magnitude: q.norm() });
        }
        Ok(self.numerator.eval_f64(z).into_iter().map(|v| v / q).collect())
    }
}

/// Any of the three map representations, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyMap {
    Poly(PolyMap),
    Weighted(WeightedMap),
    Rational(RationalMap),
}

impl AnyMap {
    pub fn n(&self) -> usize {
        match self {
            AnyMap::Poly(p) => p.n(),
            AnyMap::Weighted(w) => w.n(),
            AnyMap::Rational(r) => r.n(),
        }
    }

    pub fn to_rational(&self) -> Cow<'_, RationalMap> {
        match self {
            AnyMap::Poly(p) => Cow::Owned(RationalMap::polynomial(p.clone())),
            AnyMap::Weighted(w) => Cow::Owned(RationalMap::polynomial(w.clone())),
            AnyMap::Rational(r) => Cow::Borrowed(r),
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            AnyMap::Poly(p) => p.degree(),
            AnyMap::Weighted(w) => w.degree(),
            AnyMap::Rational(r) => r.degree(),
        }
    }
}

impl From<PolyMap> for AnyMap {
    fn from(p: PolyMap) -> Self {
        AnyMap::Poly(p)
    }
}

impl From<WeightedMap> for AnyMap {
    fn from(w: WeightedMap) -> Self {
        AnyMap::Weighted(w)
    }
}

impl From<RationalMap> for AnyMap {
    fn from(r: RationalMap) -> Self {
        AnyMap::Rational(r)
    }
}

fn check_same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: a, found: b })
    }
}

/// p ⊗ q: all pairwise products, weights multiplied. ‖p⊗q‖² = ‖p‖²‖q‖².
pub fn map_tensor(p: &impl WeightedView, q: &impl WeightedView) -> Result<WeightedMap> {
    check_same_dim(p.source_dim(), q.source_dim())?;
    let (p, q) = (p.weighted(), q.weighted());
    let mut entries = Vec::with_capacity(p.entries.len() * q.entries.len());
    for a in &p.entries {
        for b in &q.entries {
            entries.push(WeightedEntry {
                weight: &a.weight * &b.weight,
                poly: a.poly.mul(&b.poly),
            });
        }
    }
    Ok(WeightedMap { n: p.n, entries })
}

/// z^{⊗k}, the unsymmetrized k-fold tensor power of the identity.
pub fn identity_tensor_power(n: usize, k: u32) -> WeightedMap {
    let mut acc = HoloPoly::one(n).weighted().into_owned();
    let id = PolyMap::identity(n);
    for _ in 0..k {
        acc = map_tensor(&acc, &id).expect("same dimension");
    }
    acc
}

/// p ⊕ q: concatenated components. ‖p⊕q‖² = ‖p‖² + ‖q‖².
pub fn map_direct_sum(p: &impl WeightedView, q: &impl WeightedView) -> Result<WeightedMap> {
    check_same_dim(p.source_dim(), q.source_dim())?;
    let (p, q) = (p.weighted(), q.weighted());
    let mut entries = p.entries.clone();
    entries.extend(q.entries.iter().cloned());
    Ok(WeightedMap { n: p.n, entries })
}

/// Exact Σ weight_j |poly_j(z)|².
pub fn eval_norm_sq(p: &impl WeightedView, z: &[CplxRat]) -> Result<BigRational> {
    check_same_dim(p.source_dim(), z.len())?;
    let p = p.weighted();
    let mut acc = BigRational::zero();
    for e in &p.entries {
        acc += &e.weight * e.poly.eval(z).norm_sq();
    }
    Ok(acc)
}

/// z ↦ F(rz) with weights divided by `radius_sq_target`; takes the
/// r-sphere/√R²-sphere pair of F to the unit-sphere pair.
pub fn rescale(f: &RationalMap, r: &BigRational, radius_sq_target: &BigRational) -> Result<RationalMap> {
    if !r.is_positive() {
        return Err(Error::NonPositive { what: "r" });
    }
    if !radius_sq_target.is_positive() {
        return Err(Error::NonPositive { what: "R_sq" });
    }
    let inv = radius_sq_target.recip();
    let numerator = f.numerator.weighted().dilate(r).scale_weights(&inv)?;
    Ok(RationalMap {
        numerator: Numerator::Weighted(numerator),
        denominator: f.denominator.dilate(r),
        reduced_claimed: f.reduced_claimed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::multi_index::MultiIndex;
    use crate::exactcore::rational::{rat, rat_int};

    fn h2() -> WeightedMap {
        WeightedMap::from_pairs(
            2,
            MultiIndex::all_of_degree(2, 2)
                .into_iter()
                .zip([1, 2, 1])
                .map(|(a, w)| (rat_int(w), HoloPoly::monomial(a, CplxRat::one()))),
        )
        .unwrap()
    }

    #[test]
    fn tensor_of_identity_with_itself() {
        let id = PolyMap::identity(2);
        let t = map_tensor(&id, &id).unwrap();
        assert_eq!(t.target_dim(), 4);
        let z = [CplxRat::from_ints(1, 2), CplxRat::real(rat(1, 3))];
        let nz = eval_norm_sq(&id, &z).unwrap();
        assert_eq!(eval_norm_sq(&t, &z).unwrap(), &nz * &nz);
    }

    #[test]
    fn tensor_with_constant_one_is_identity() {
        let id = PolyMap::identity(2);
        let t = map_tensor(&id, &HoloPoly::one(2)).unwrap();
        assert_eq!(t, id.to_weighted());
    }

    #[test]
    fn h2_tensor_z_has_sixth_power_norm() {
        let t = map_tensor(&h2(), &PolyMap::identity(2)).unwrap();
        assert_eq!(t.degree(), 3);
        let z = [CplxRat::from_ints(2, -1), CplxRat::real(rat(3, 5))];
        let nz = eval_norm_sq(&PolyMap::identity(2), &z).unwrap();
        assert_eq!(eval_norm_sq(&t, &z).unwrap(), &nz * &nz * &nz);
    }

    #[test]
    fn direct_sum_examples() {
        let padded = map_direct_sum(&PolyMap::identity(2), &PolyMap::zero(2, 1)).unwrap();
        assert_eq!(padded.target_dim(), 3);
        assert!(padded.entries()[2].poly.is_zero());

        let scaled = PolyMap::identity(2).to_weighted().scale_weights(&rat_int(3)).unwrap();
        let s = map_direct_sum(&scaled, &WeightedMap::constant_sqrt(2, rat_int(4)).unwrap()).unwrap();
        let weights: Vec<_> = s.entries().iter().map(|e| e.weight.clone()).collect();
        assert_eq!(weights, vec![rat_int(3), rat_int(3), rat_int(4)]);
        let z = [CplxRat::from_ints(1, 1), CplxRat::from_ints(0, 2)];
        assert_eq!(eval_norm_sq(&s, &z).unwrap(), rat_int(3 * 6 + 4));
    }

    #[test]
    fn norm_evaluations() {
        let id = PolyMap::identity(2);
        assert_eq!(eval_norm_sq(&id, &[CplxRat::one(), CplxRat::zero()]).unwrap(), rat_int(1));
        assert_eq!(eval_norm_sq(&h2(), &[CplxRat::one(), CplxRat::one()]).unwrap(), rat_int(4));
        let c = WeightedMap::constant_sqrt(2, rat_int(5)).unwrap();
        assert_eq!(eval_norm_sq(&c, &[CplxRat::from_ints(3, 1), CplxRat::one()]).unwrap(), rat_int(5));
    }

    #[test]
    fn float_evaluation_and_poles() {
        let id = RationalMap::polynomial(PolyMap::identity(2));
        let v = id.eval_float(&[Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert_eq!(v, vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)]);

        let q = HoloPoly::affine_one_plus(&[CplxRat::real(rat(1, 8)), CplxRat::zero()]);
        let f = RationalMap::new(PolyMap::identity(2), q, true).unwrap();
        let z = [Complex64::new(0.0, 8.0), Complex64::new(0.0, 0.0)];
        let v = f.eval_float(&z).unwrap();
        let expected = Complex64::new(0.0, 8.0) / Complex64::new(1.0, 1.0);
        assert!((v[0] - expected).norm() < 1e-14);
        assert!(matches!(
            f.eval_float(&[Complex64::new(-8.0, 0.0), Complex64::new(0.0, 0.0)]),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn rescale_cases() {
        let id = RationalMap::polynomial(PolyMap::identity(2));
        let same = rescale(&id, &rat_int(1), &rat_int(1)).unwrap();
        assert_eq!(same.numerator().weighted().into_owned(), PolyMap::identity(2).to_weighted());

        let r = rescale(&RationalMap::polynomial(h2()), &rat_int(2), &rat_int(16)).unwrap();
        // On the unit sphere ‖H₂(2z)‖²/16 = 1.
        let z = [CplxRat::real(rat(3, 5)), CplxRat::real(rat(4, 5))];
        assert_eq!(eval_norm_sq(r.numerator(), &z).unwrap(), rat_int(1));

        assert!(rescale(&id, &rat_int(0), &rat_int(1)).is_err());
        assert!(rescale(&id, &rat_int(1), &rat_int(-1)).is_err());
    }
}
