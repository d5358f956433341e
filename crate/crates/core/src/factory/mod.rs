//! Example families: symmetrized homogeneous powers, monomial maps that are
//! k-fold but not (k+1)-fold, their rational counterparts, and the exact
//! sum-of-squares decomposer behind them.

mod sos;

pub use sos::{sos_decompose, NotPsdWitness, SosOutcome};

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactcore::{
    identity_tensor_power, map_tensor, AnyMap, CplxRat, HoloPoly, MultiIndex, RationalMap, WeightedMap,
};
use crate::foldanalysis::{fold_profile, FoldProfile, RootValue};
use crate::hermitian::{squared_norm, HermPoly};

/// Weights scale_sq·multinomial(d, α) on the monomials z^α with |α| = d,
/// so the squared norm is scale_sq·‖z‖^{2d}.
pub fn homogeneous_map(n: usize, d: u32, scale_sq: &BigRational) -> Result<WeightedMap> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !scale_sq.is_positive() {
        return Err(Error::NonPositive { what: "scale_sq" });
    }
    WeightedMap::from_pairs(
        n,
        MultiIndex::all_of_degree(n, d).into_iter().map(|a| {
            let w = scale_sq * BigRational::from_integer(a.multinomial());
            (w, HoloPoly::monomial(a, CplxRat::one()))
        }),
    )
}

/// Intermediate objects of a construction, kept for audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoryTrace {
    pub qpp: HermPoly,
    pub qp: HermPoly,
    pub q: HermPoly,
    pub q0: HermPoly,
    pub c: BigRational,
    pub c_alpha: BTreeMap<MultiIndex, BigRational>,
    pub d_alpha: BTreeMap<MultiIndex, BigRational>,
    pub e_alpha: BTreeMap<MultiIndex, BigRational>,
    pub f_beta: BTreeMap<MultiIndex, BigRational>,
    pub a: Vec<CplxRat>,
    pub substitution_note: String,
}

/// Diagonal coefficients d with Q = Σ d_α |z^α|²; errors on off-diagonal terms.
fn diagonal(q: &HermPoly) -> Result<BTreeMap<MultiIndex, BigRational>> {
    let mut out = BTreeMap::new();
    for ((a, b), c) in q.coeffs() {
        if a != b || !c.im.is_zero() {
            return Err(Error::Internal("expected a diagonal table".into()));
        }
        out.insert(a.clone(), c.re.clone());
    }
    Ok(out)
}

fn check_radii(n: usize, k: usize, radii_sq: &[BigRational]) -> Result<Vec<BigRational>> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if radii_sq.len() != k {
        return Err(Error::InvalidParameter(format!(
            "expected {k} squared radii, got {}",
            radii_sq.len()
        )));
    }
    let mut sorted = radii_sq.to_vec();
    if sorted.iter().any(|t| !t.is_positive()) {
        return Err(Error::NonPositive { what: "radius" });
    }
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateRadius(w[0].to_string()));
    }
    Ok(sorted)
}

/// Π(‖z‖² − t_j), its coefficients and the slack c = 1 + max|c_α|.
fn slack_product(n: usize, radii: &[BigRational]) -> Result<(HermPoly, BTreeMap<MultiIndex, BigRational>, BigRational)> {
    let qpp = radii
        .iter()
        .fold(HermPoly::one(n), |acc, t| acc.mul(&HermPoly::sphere_divisor(n, t)));
    let c_alpha = diagonal(&qpp)?;
    let max = c_alpha.values().map(|v| v.abs()).max().unwrap_or_else(BigRational::zero);
    Ok((qpp, c_alpha, max + BigRational::one()))
}

/// (1 + ‖z‖²)^e.
fn one_plus_norm_pow(n: usize, e: u32) -> HermPoly {
    HermPoly::one(n).add(&HermPoly::norm_z_sq(n)).pow(e)
}

fn validate(profile: &FoldProfile, radii: &[BigRational]) -> Result<()> {
    let FoldProfile::Finite(entries) = profile else {
        return Err(Error::ValidationFailed("constructed map is ∞-fold".into()));
    };
    let ts: Vec<Option<&BigRational>> = entries
        .iter()
        .map(|e| match &e.t {
            RootValue::Exact(t) => Some(t),
            RootValue::Interval { .. } => None,
        })
        .collect();
    if ts.len() != radii.len() || ts.iter().zip(radii).any(|(a, b)| *a != Some(b)) {
        return Err(Error::ValidationFailed(format!(
            "fold profile {:?} differs from the requested radii",
            entries
        )));
    }
    Ok(())
}

const POLY_NOTE: &str = "(1+‖z‖²)^(k+1) used in place of ‖z‖^(2(k+1)) so that every e_α is positive; \
the added term is constant on every sphere";

/// Degree-m monomial map whose fold profile is exactly the given squared radii.
pub fn poly_k_fold(n: usize, k: usize, m: usize, radii_sq: &[BigRational]) -> Result<(WeightedMap, FactoryTrace)> {
    let radii = check_radii(n, k, radii_sq)?;
    if m <= k {
        return Err(Error::InvalidParameter(format!("m = {m} must exceed k = {k}")));
    }
    let (qpp, c_alpha, c) = slack_product(n, &radii)?;
    let positive = one_plus_norm_pow(n, k as u32 + 1);
    let d_alpha = diagonal(&positive)?;
    let z1_sq = HermPoly::from_diagonal(n, [(MultiIndex::unit(n, 0), BigRational::one())]);
    let qp = z1_sq.mul(&qpp).scale(&(BigRational::one() / &c)).add(&positive);
    let e_alpha = diagonal(&qp)?;
    if e_alpha.values().any(|e| !e.is_positive()) {
        return Err(Error::Internal("nonpositive e_α".into()));
    }
    let inner = WeightedMap::from_pairs(
        n,
        e_alpha
            .iter()
            .map(|(a, e)| (e.clone(), HoloPoly::monomial(a.clone(), CplxRat::one()))),
    )?;
    let outer_deg = (m - k - 1) as u32;
    let p = map_tensor(&identity_tensor_power(n, outer_deg), &inner)?;
    let f_beta = diagonal(&HermPoly::norm_z_pow(n, outer_deg))?;
    let q0 = squared_norm(&p);

    validate(&fold_profile(&p.clone().into())?, &radii)?;
    let trace = FactoryTrace {
        qpp,
        q: qp.clone(),
        qp,
        q0,
        c,
        c_alpha,
        d_alpha,
        e_alpha,
        f_beta,
        a: Vec::new(),
        substitution_note: POLY_NOTE.into(),
    };
    Ok((p, trace))
}

const RATIONAL_NOTE: &str = "(1+‖z‖²)^(k-1) used in place of ‖z‖^(2(k-1)) so that every e_α is positive; \
tensor exponent m-k used so that the numerator has degree m";

/// Degree-m rational map (z^{⊗(m−k)} ⊗ p₀)/(1 + a·z) whose fold profile is
/// exactly the given squared radii.
pub fn rational_k_fold(
    n: usize,
    k: usize,
    m: usize,
    radii_sq: &[BigRational],
    a: &[CplxRat],
) -> Result<(RationalMap, FactoryTrace)> {
    let radii = check_radii(n, k, radii_sq)?;
    if m < k {
        return Err(Error::InvalidParameter(format!("m = {m} must be at least k = {k}")));
    }
    if a.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.len(),
        });
    }
    if a.iter().all(Zero::is_zero) {
        return Err(Error::InvalidParameter("a must be nonzero".into()));
    }
    let (qpp, c_alpha, c) = slack_product(n, &radii)?;
    let inv_c = BigRational::one() / &c;
    let positive = one_plus_norm_pow(n, k as u32 - 1);
    let d_alpha = diagonal(&positive)?;
    let qp = qpp.scale(&inv_c).add(&positive);
    let e_alpha = diagonal(&qp)?;

    let denom = HoloPoly::affine_one_plus(a);
    let denom_sq = squared_norm(&denom);
    let q = qpp.scale(&inv_c).add(&denom_sq.mul(&positive));

    let full_basis = MultiIndex::all_up_to_degree(n, k as u32);
    match sos::ldl(&q, &full_basis) {
        Ok(pivots) if pivots.len() == full_basis.len() => {}
        _ => {
            return Err(Error::SlackTooLarge(
                "coefficient matrix of Q is not positive definite".into(),
            ))
        }
    }
    if qpp.divide_exact(&denom_sq).is_some() {
        return Err(Error::SlackTooLarge(
            "|q|² divides the product of the sphere factors".into(),
        ));
    }
    let SosOutcome::Sos(p0) = sos_decompose(&q) else {
        return Err(Error::Internal("positive definite Q without a decomposition".into()));
    };
    let outer_deg = (m - k) as u32;
    let p = map_tensor(&identity_tensor_power(n, outer_deg), &p0)?;
    let f_beta = diagonal(&HermPoly::norm_z_pow(n, outer_deg))?;
    let q0 = squared_norm(&p);
    let f = RationalMap::new(p, denom, true)?;

    validate(&fold_profile(&f.clone().into())?, &radii)?;
    let trace = FactoryTrace {
        qpp,
        qp,
        q,
        q0,
        c,
        c_alpha,
        d_alpha,
        e_alpha,
        f_beta,
        a: a.to_vec(),
        substitution_note: RATIONAL_NOTE.into(),
    };
    Ok((f, trace))
}

/// One cell of the polynomial family grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridRow {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub degree: i64,
    pub profile_size: usize,
    pub infinite: bool,
}

/// Builds poly_k_fold(n, k, m, [1, …, k]) for every n in `ns` and
/// 1 ≤ k < m ≤ max_m, and recomputes each fold profile. Cells run in parallel.
pub fn poly_k_fold_grid(ns: &[usize], max_m: usize) -> Result<Vec<GridRow>> {
    let cells: Vec<(usize, usize, usize)> = ns
        .iter()
        .flat_map(|&n| (2..=max_m).flat_map(move |m| (1..m).map(move |k| (n, k, m))))
        .collect();
    cells
        .into_par_iter()
        .map(|(n, k, m)| {
            let radii: Vec<BigRational> = (1..=k as i64).map(|i| BigRational::from_integer(i.into())).collect();
            let (w, _) = poly_k_fold(n, k, m, &radii)?;
            let degree = w.degree();
            let profile = fold_profile(&AnyMap::Weighted(w))?;
            Ok(GridRow {
                n,
                k,
                m,
                degree,
                profile_size: profile.entries().len(),
                infinite: profile.is_infinite(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::{rat, rat_int};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn homogeneous_examples() {
        let h = homogeneous_map(2, 2, &rat_int(1)).unwrap();
        let w: Vec<_> = h.entries().iter().map(|e| e.weight.clone()).collect();
        assert_eq!(w, vec![rat_int(1), rat_int(2), rat_int(1)]);
        assert_eq!(squared_norm(&homogeneous_map(3, 0, &rat_int(9)).unwrap()), HermPoly::constant(3, rat_int(9)));
        let h3 = homogeneous_map(2, 3, &rat_int(1)).unwrap();
        let w: Vec<_> = h3.entries().iter().map(|e| e.weight.clone()).collect();
        assert_eq!(w, vec![rat_int(1), rat_int(3), rat_int(3), rat_int(1)]);
    }

    #[test]
    fn poly_one_fold() {
        let (p, trace) = poly_k_fold(2, 1, 2, &[rat_int(1)]).unwrap();
        let expected: BTreeMap<MultiIndex, BigRational> = [
            (mi(&[0, 0]), rat_int(1)),
            (mi(&[1, 0]), rat(3, 2)),
            (mi(&[0, 1]), rat_int(2)),
            (mi(&[2, 0]), rat(3, 2)),
            (mi(&[1, 1]), rat(5, 2)),
            (mi(&[0, 2]), rat_int(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(trace.e_alpha, expected);
        assert_eq!(trace.c, rat_int(2));
        assert_eq!(
            fold_profile(&p.into()).unwrap().exact_pairs(),
            vec![(rat_int(1), rat_int(4))]
        );
    }

    #[test]
    fn poly_tensored_with_z() {
        let (inner, _) = poly_k_fold(2, 1, 2, &[rat_int(1)]).unwrap();
        let (p, _) = poly_k_fold(2, 1, 3, &[rat_int(1)]).unwrap();
        assert_eq!(p.degree(), 3);
        let expected = map_tensor(&identity_tensor_power(2, 1), &inner).unwrap();
        assert_eq!(squared_norm(&p), squared_norm(&expected));
        assert_eq!(fold_profile(&p.into()).unwrap().exact_pairs(), vec![(rat_int(1), rat_int(4))]);
    }

    #[test]
    fn poly_two_folds() {
        let (p, _) = poly_k_fold(2, 2, 3, &[rat_int(4), rat_int(1)]).unwrap();
        assert_eq!(p.degree(), 3);
        let ts: Vec<_> = fold_profile(&p.into()).unwrap().exact_pairs().into_iter().map(|x| x.0).collect();
        assert_eq!(ts, vec![rat_int(1), rat_int(4)]);
    }

    #[test]
    fn rational_one_fold() {
        let a = [CplxRat::real(rat(1, 8)), CplxRat::zero()];
        let (f, trace) = rational_k_fold(2, 1, 2, &[rat_int(1)], &a).unwrap();
        assert_eq!(f.denominator().degree(), Some(1));
        assert_eq!(f.numerator().degree(), 2);
        let expected_q = HermPoly::sphere_divisor(2, &rat_int(1))
            .scale(&rat(1, 2))
            .add(&squared_norm(&HoloPoly::affine_one_plus(&a)));
        assert_eq!(trace.q, expected_q);
        assert_eq!(
            fold_profile(&f.into()).unwrap().exact_pairs(),
            vec![(rat_int(1), rat_int(1))]
        );
    }

    #[test]
    fn rational_rejections() {
        let zero = [CplxRat::zero(), CplxRat::zero()];
        assert!(matches!(
            rational_k_fold(2, 1, 2, &[rat_int(1)], &zero),
            Err(Error::InvalidParameter(_))
        ));
        let big = [CplxRat::real(rat_int(10)), CplxRat::zero()];
        assert!(matches!(
            rational_k_fold(2, 1, 2, &[rat_int(1)], &big),
            Err(Error::SlackTooLarge(_))
        ));
    }
}
