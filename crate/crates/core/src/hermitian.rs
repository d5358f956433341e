//! Hermitian polynomials Q(z, z̄) stored as coefficient tables indexed by
//! pairs of multi-indices, with exact division modulo ‖z‖² − t.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactcore::{
    monomial_f64, CplxRat, HoloPoly, MultiIndex, PolyMap, WeightedMap, WeightedView,
};
use crate::univariate::GaussPoly;

/// (α, β) indexes the coefficient of z^α z̄^β.
pub type HermKey = (MultiIndex, MultiIndex);

pub(crate) type Table<C> = BTreeMap<HermKey, C>;

/// Coefficient rings the sphere reduction can run over.
pub(crate) trait Coeff:
    Clone + PartialEq + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone + PartialEq + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

pub(crate) fn table_add<C: Coeff>(table: &mut Table<C>, key: HermKey, c: C) {
    if c.is_zero() {
        return;
    }
    match table.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get().clone() + c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

/// Divides `table` by ‖z‖² − t, rewriting the product z_e z̄_e as
/// t − Σ_{j≠e} z_j z̄_j until no key has α_e > 0 and β_e > 0.
/// Returns (quotient, remainder).
pub(crate) fn reduce_table<C: Coeff>(n: usize, mut work: Table<C>, t: &C, elim: usize) -> (Table<C>, Table<C>) {
    let mut quotient: Table<C> = BTreeMap::new();
    loop {
        let pending: Vec<HermKey> = work
            .keys()
            .filter(|(a, b)| a.get(elim) > 0 && b.get(elim) > 0)
            .cloned()
            .collect();
        if pending.is_empty() {
            break;
        }
        for key in pending {
            let Some(c) = work.remove(&key) else { continue };
            let a = key.0.with_added(elim, -1);
            let b = key.1.with_added(elim, -1);
            table_add(&mut quotient, (a.clone(), b.clone()), c.clone());
            table_add(&mut work, (a.clone(), b.clone()), c.clone() * t.clone());
            for j in (0..n).filter(|&j| j != elim) {
                table_add(&mut work, (a.with_added(j, 1), b.with_added(j, 1)), -c.clone());
            }
        }
    }
    (quotient, work)
}

fn table_mul<C: Coeff>(a: &Table<C>, b: &Table<C>) -> Table<C> {
    let mut out = BTreeMap::new();
    for ((a1, b1), c1) in a {
        for ((a2, b2), c2) in b {
            table_add(&mut out, (a1.add(a2), b1.add(b2)), c1.clone() * c2.clone());
        }
    }
    out
}

/// Real-valued polynomial Q(z, z̄) = Σ c_{αβ} z^α z̄^β with
/// c_{βα} = conj(c_{αβ}). Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermPoly {
    n: usize,
    coeffs: Table<CplxRat>,
}

impl HermPoly {
    /// Validates dimensions and hermitian symmetry; asymmetric input is
    /// rejected rather than symmetrized.
    pub fn new(n: usize, coeffs: impl IntoIterator<Item = (HermKey, CplxRat)>) -> Result<Self> {
        let mut table = BTreeMap::new();
        for ((a, b), c) in coeffs {
            if a.dim() != n || b.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: if a.dim() != n { a.dim() } else { b.dim() },
                });
            }
            table_add(&mut table, (a, b), c);
        }
        for ((a, b), c) in &table {
            let mirror = table.get(&(b.clone(), a.clone())).cloned().unwrap_or_default();
            if mirror != c.conj() {
                return Err(Error::NotHermitian(format!("({a:?}, {b:?})")));
            }
        }
        Ok(Self { n, coeffs: table })
    }

    pub(crate) fn from_table_unchecked(n: usize, coeffs: Table<CplxRat>) -> Self {
        debug_assert!(coeffs
            .iter()
            .all(|((a, b), c)| coeffs.get(&(b.clone(), a.clone())) == Some(&c.conj())));
        Self { n, coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        table_add(&mut coeffs, (MultiIndex::zero(n), MultiIndex::zero(n)), CplxRat::real(c));
        Self { n, coeffs }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, BigRational::one())
    }

    /// Σ d_α |z^α|².
    pub fn from_diagonal(n: usize, diag: impl IntoIterator<Item = (MultiIndex, BigRational)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (a, d) in diag {
            table_add(&mut coeffs, (a.clone(), a), CplxRat::real(d));
        }
        Self { n, coeffs }
    }

    /// ‖z‖².
    pub fn norm_z_sq(n: usize) -> Self {
        Self::from_diagonal(n, (0..n).map(|i| (MultiIndex::unit(n, i), BigRational::one())))
    }

    /// ‖z‖^{2j}.
    pub fn norm_z_pow(n: usize, j: u32) -> Self {
        let base = Self::norm_z_sq(n);
        let mut acc = Self::one(n);
        for _ in 0..j {
            acc = acc.mul(&base);
        }
        acc
    }

    /// ‖z‖² − t.
    pub fn sphere_divisor(n: usize, t: &BigRational) -> Self {
        Self::norm_z_sq(n).sub(&Self::constant(n, t.clone()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &BTreeMap<HermKey, CplxRat> {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &MultiIndex, beta: &MultiIndex) -> CplxRat {
        self.coeffs
            .get(&(alpha.clone(), beta.clone()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// (max |α|, max |β|); (−1, −1) for the zero polynomial.
    pub fn bidegree(&self) -> (i64, i64) {
        let d1 = self.coeffs.keys().map(|(a, _)| i64::from(a.degree())).max().unwrap_or(-1);
        let d2 = self.coeffs.keys().map(|(_, b)| i64::from(b.degree())).max().unwrap_or(-1);
        (d1, d2)
    }

    /// The value when Q is a constant polynomial.
    pub fn constant_value(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let ((a, b), c) = self.coeffs.iter().next()?;
                (a.degree() == 0 && b.degree() == 0).then(|| c.re.clone())
            }
            _ => None,
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            })
        }
    }

    /// Panics on dimension mismatch; see [`herm_add`] for the checked form.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            table_add(&mut coeffs, k.clone(), c.clone());
        }
        Self { n: self.n, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self {
            n: self.n,
            coeffs: table_mul(&self.coeffs, &other.coeffs),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v.scale(c))).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Keeps exactly the keys with |α| = |β| = d.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .filter(|((a, b), _)| a.degree() == d && b.degree() == d)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sorted union of the holomorphic multi-indices appearing in the table.
    pub fn monomial_basis(&self) -> Vec<MultiIndex> {
        let mut basis: Vec<MultiIndex> = self.coeffs.keys().map(|(a, _)| a.clone()).collect();
        basis.sort();
        basis.dedup();
        basis
    }

    /// v*·(coefficient matrix)·v over `basis`, i.e. Σ conj(v_α) c_{αβ} v_β.
    pub fn form_value(&self, basis: &[MultiIndex], v: &[CplxRat]) -> BigRational {
        let mut acc = CplxRat::zero();
        for ((a, b), c) in &self.coeffs {
            let (Some(i), Some(j)) = (basis.iter().position(|x| x == a), basis.iter().position(|x| x == b)) else {
                continue;
            };
            acc += &(&(&v[i].conj() * c) * &v[j]);
        }
        debug_assert!(acc.im.is_zero());
        acc.re
    }

    /// Exact value at a Gaussian-rational point.
    pub fn eval(&self, z: &[CplxRat]) -> BigRational {
        let mut acc = CplxRat::zero();
        for ((a, b), c) in &self.coeffs {
            let za = HoloPoly::monomial(a.clone(), CplxRat::one()).eval(z);
            let zb = HoloPoly::monomial(b.clone(), CplxRat::one()).eval(z).conj();
            acc += &(&(c * &za) * &zb);
        }
        acc.re
    }

    pub fn eval_f64(&self, z: &[Complex64]) -> f64 {
        self.polarize_eval(z, z).re
    }

    /// Σ c_{αβ} z^α conj(w)^β.
    pub fn polarize_eval(&self, z: &[Complex64], w: &[Complex64]) -> Complex64 {
        let wbar: Vec<Complex64> = w.iter().map(|x| x.conj()).collect();
        self.coeffs
            .iter()
            .map(|((a, b), c)| c.to_complex64() * monomial_f64(a, z) * monomial_f64(b, &wbar))
            .sum()
    }

    /// Division by ‖z‖² − t eliminating z₁z̄₁.
    pub fn reduce_mod_sphere(&self, t: &BigRational) -> Result<SphereReduction> {
        self.reduce_mod_sphere_with(t, 0)
    }

    /// Division by ‖z‖² − t eliminating the product z_e z̄_e.
    pub fn reduce_mod_sphere_with(&self, t: &BigRational, eliminated: usize) -> Result<SphereReduction> {
        if !t.is_positive() {
            return Err(Error::NonPositive { what: "t" });
        }
        if eliminated >= self.n {
            return Err(Error::InvalidParameter(format!(
                "eliminated variable {eliminated} out of range for n = {}",
                self.n
            )));
        }
        let (q, r) = reduce_table(self.n, self.coeffs.clone(), &CplxRat::real(t.clone()), eliminated);
        Ok(SphereReduction {
            t: t.clone(),
            quotient: Self::from_table_unchecked(self.n, q),
            remainder: Self::from_table_unchecked(self.n, r),
        })
    }

    /// Some(c) iff Q ≡ c on the sphere ‖z‖² = t.
    pub fn constant_on_sphere(&self, t: &BigRational) -> Result<Option<BigRational>> {
        Ok(self.reduce_mod_sphere(t)?.remainder.constant_value())
    }

    /// Coefficients lifted to polynomials in a symbolic parameter.
    pub(crate) fn to_symbolic(&self) -> Table<GaussPoly> {
        self.coeffs
            .iter()
            .map(|(k, c)| (k.clone(), GaussPoly::constant(c.clone())))
            .collect()
    }

    /// Exact quotient self / divisor in ℚ(i)[z, z̄], or `None` when the
    /// divisor does not divide.
    pub fn divide_exact(&self, divisor: &Self) -> Option<Self> {
        assert_eq!(self.n, divisor.n, "dimension mismatch");
        let lead_key = divisor.coeffs.keys().max_by(|x, y| monomial_order(x, y))?.clone();
        let lead = divisor.coeffs[&lead_key].clone();
        let mut work = self.coeffs.clone();
        let mut quotient = BTreeMap::new();
        while let Some(key) = work.keys().max_by(|x, y| monomial_order(x, y)).cloned() {
            let (Some(da), Some(db)) = (key.0.checked_sub(&lead_key.0), key.1.checked_sub(&lead_key.1)) else {
                return None;
            };
            let c = &work[&key] / &lead;
            for ((a, b), dc) in &divisor.coeffs {
                table_add(&mut work, (a.add(&da), b.add(&db)), -(&c * dc));
            }
            table_add(&mut quotient, (da, db), c);
        }
        Some(Self::from_table_unchecked(self.n, quotient))
    }
}

/// Graded lexicographic order on the concatenated exponent vector (α, β).
fn monomial_order(x: &HermKey, y: &HermKey) -> Ordering {
    let dx = x.0.degree() + x.1.degree();
    let dy = y.0.degree() + y.1.degree();
    dx.cmp(&dy)
        .then_with(|| x.0.exponents().cmp(y.0.exponents()))
        .then_with(|| x.1.exponents().cmp(y.1.exponents()))
}

/// Q = quotient·(‖z‖² − t) + remainder, remainder free of z₁z̄₁ products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereReduction {
    pub t: BigRational,
    pub quotient: HermPoly,
    pub remainder: HermPoly,
}

impl SphereReduction {
    /// quotient·(‖z‖² − t) + remainder.
    pub fn reconstruct(&self) -> HermPoly {
        let n = self.quotient.n();
        self.quotient
            .mul(&HermPoly::sphere_divisor(n, &self.t))
            .add(&self.remainder)
    }
}

/// Σ_j weight_j · p_j(z)·conj(p_j(z)) as a coefficient table.
pub fn squared_norm(p: &impl WeightedView) -> HermPoly {
    let w = p.weighted();
    let n = w.n();
    let mut coeffs = BTreeMap::new();
    for e in w.entries() {
        let weight = CplxRat::real(e.weight.clone());
        for (a, ca) in e.poly.terms() {
            let wa = &weight * ca;
            for (b, cb) in e.poly.terms() {
                table_add(&mut coeffs, (a.clone(), b.clone()), &wa * &cb.conj());
            }
        }
    }
    HermPoly::from_table_unchecked(n, coeffs)
}

pub fn herm_add(a: &HermPoly, b: &HermPoly) -> Result<HermPoly> {
    a.check_dim(b)?;
    Ok(a.add(b))
}

pub fn herm_mul(a: &HermPoly, b: &HermPoly) -> Result<HermPoly> {
    a.check_dim(b)?;
    Ok(a.mul(b))
}

pub fn herm_scale(a: &HermPoly, c: &BigRational) -> HermPoly {
    a.scale(c)
}

/// Objects that support the affine substitution z ↦ z + c.
pub trait Shiftable: Sized {
    fn source_dim(&self) -> usize;
    fn shifted(&self, c: &[CplxRat]) -> Self;
}

impl Shiftable for HoloPoly {
    fn source_dim(&self) -> usize {
        self.n()
    }
    fn shifted(&self, c: &[CplxRat]) -> Self {
        self.shift(c)
    }
}

impl Shiftable for PolyMap {
    fn source_dim(&self) -> usize {
        self.n()
    }
    fn shifted(&self, c: &[CplxRat]) -> Self {
        self.shift(c)
    }
}

impl Shiftable for WeightedMap {
    fn source_dim(&self) -> usize {
        self.n()
    }
    fn shifted(&self, c: &[CplxRat]) -> Self {
        self.shift(c)
    }
}

/// Exact substitution z ↦ z + c.
pub fn shift_center<T: Shiftable>(p: &T, c: &[CplxRat]) -> Result<T> {
    if c.len() != p.source_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.source_dim(),
            found: c.len(),
        });
    }
    Ok(p.shifted(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::{rat, rat_int};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

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
    fn squared_norm_examples() {
        assert_eq!(squared_norm(&PolyMap::identity(2)), HermPoly::norm_z_sq(2));
        assert_eq!(squared_norm(&h2()), HermPoly::norm_z_pow(2, 2));

        let q = HoloPoly::affine_one_plus(&[CplxRat::real(rat(1, 8)), CplxRat::zero()]);
        let nq = squared_norm(&q);
        let expected = HermPoly::new(
            2,
            [
                ((mi(&[0, 0]), mi(&[0, 0])), CplxRat::one()),
                ((mi(&[1, 0]), mi(&[0, 0])), CplxRat::real(rat(1, 8))),
                ((mi(&[0, 0]), mi(&[1, 0])), CplxRat::real(rat(1, 8))),
                ((mi(&[1, 0]), mi(&[1, 0])), CplxRat::real(rat(1, 64))),
            ],
        )
        .unwrap();
        assert_eq!(nq, expected);
        assert_eq!(
            nq.homogeneous_part(1),
            HermPoly::from_diagonal(2, [(mi(&[1, 0]), rat(1, 64))])
        );
    }

    #[test]
    fn ring_operations() {
        let q = HermPoly::norm_z_sq(2);
        assert_eq!(herm_add(&q, &HermPoly::zero(2)).unwrap(), q);
        let prod = herm_mul(
            &q.sub(&HermPoly::one(2)),
            &q.add(&HermPoly::one(2)),
        )
        .unwrap();
        assert_eq!(prod, HermPoly::norm_z_pow(2, 2).sub(&HermPoly::one(2)));
        let half = herm_scale(&q, &rat(1, 2));
        assert_eq!(half.coeff(&mi(&[1, 0]), &mi(&[1, 0])), CplxRat::real(rat(1, 2)));
        assert!(herm_add(&q, &HermPoly::zero(3)).is_err());
    }

    #[test]
    fn homogeneous_parts() {
        let q = HermPoly::one(2).add(&HermPoly::norm_z_sq(2));
        assert_eq!(q.homogeneous_part(1), HermPoly::norm_z_sq(2));
        assert!(HermPoly::norm_z_pow(2, 2).homogeneous_part(1).is_zero());
        assert_eq!(HermPoly::zero(2).bidegree(), (-1, -1));
    }

    #[test]
    fn asymmetric_table_rejected() {
        let r = HermPoly::new(2, [((mi(&[1, 0]), mi(&[0, 0])), CplxRat::one())]);
        assert!(matches!(r, Err(Error::NotHermitian(_))));
    }

    #[test]
    fn reduce_examples() {
        let r = HermPoly::norm_z_sq(2).reduce_mod_sphere(&rat_int(1)).unwrap();
        assert_eq!(r.quotient, HermPoly::one(2));
        assert_eq!(r.remainder, HermPoly::one(2));

        let t = rat(3, 2);
        let r = HermPoly::norm_z_pow(2, 2).reduce_mod_sphere(&t).unwrap();
        assert_eq!(r.quotient, HermPoly::norm_z_sq(2).add(&HermPoly::constant(2, t.clone())));
        assert_eq!(r.remainder, HermPoly::constant(2, &t * &t));

        // |z₁|⁴ + |z₂|² at t = 1 leaves 1 − 2|z₂|² + |z₂|⁴ + |z₂|².
        let q = HermPoly::from_diagonal(2, [(mi(&[2, 0]), rat_int(1)), (mi(&[0, 1]), rat_int(1))]);
        let r = q.reduce_mod_sphere(&rat_int(1)).unwrap();
        let expected = HermPoly::from_diagonal(
            2,
            [
                (mi(&[0, 0]), rat_int(1)),
                (mi(&[0, 1]), rat_int(-1)),
                (mi(&[0, 2]), rat_int(1)),
            ],
        );
        assert_eq!(r.remainder, expected);
        assert_eq!(r.reconstruct(), q);
        assert!(q.reduce_mod_sphere(&rat_int(0)).is_err());
    }

    #[test]
    fn constancy_on_spheres() {
        let q4 = HermPoly::norm_z_pow(2, 2);
        assert_eq!(q4.constant_on_sphere(&rat_int(4)).unwrap(), Some(rat_int(16)));
        let q = HermPoly::from_diagonal(2, [(mi(&[2, 0]), rat_int(1)), (mi(&[0, 1]), rat_int(1))]);
        assert_eq!(q.constant_on_sphere(&rat_int(1)).unwrap(), None);
        assert_eq!(
            HermPoly::constant(2, rat_int(7)).constant_on_sphere(&rat(5, 3)).unwrap(),
            Some(rat_int(7))
        );
    }

    #[test]
    fn one_variable_reduction_leaves_pure_tails() {
        let z = HoloPoly::var(1, 0);
        let p = z.pow(2).add(&HoloPoly::one(1));
        let q = squared_norm(&p);
        let r = q.reduce_mod_sphere(&rat_int(2)).unwrap();
        for (a, b) in r.remainder.coeffs().keys() {
            assert!(a.get(0) == 0 || b.get(0) == 0);
        }
        assert_eq!(r.reconstruct(), q);
    }

    #[test]
    fn polarization() {
        let q = HermPoly::norm_z_sq(2);
        let z = [Complex64::new(0.3, -0.2), Complex64::new(1.1, 0.5)];
        let v = q.polarize_eval(&z, &z);
        assert!((v.re - (0.13 + 1.46)).abs() < 1e-12 && v.im.abs() < 1e-12);
        let e1 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let e2 = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert_eq!(q.polarize_eval(&e1, &e2), Complex64::new(0.0, 0.0));
        assert_eq!(HermPoly::one(2).polarize_eval(&e1, &z), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn exact_division() {
        let q = squared_norm(&HoloPoly::affine_one_plus(&[CplxRat::real(rat(1, 8)), CplxRat::zero()]));
        let prod = q.mul(&HermPoly::norm_z_sq(2));
        assert_eq!(prod.divide_exact(&q), Some(HermPoly::norm_z_sq(2)));
        assert_eq!(HermPoly::sphere_divisor(2, &rat_int(1)).divide_exact(&q), None);
    }

    #[test]
    fn shift_center_examples() {
        let id = PolyMap::identity(2);
        let zero = [CplxRat::zero(), CplxRat::zero()];
        assert_eq!(shift_center(&id, &zero).unwrap(), id);
        assert!(shift_center(&id, &[CplxRat::zero()]).is_err());
    }
}
