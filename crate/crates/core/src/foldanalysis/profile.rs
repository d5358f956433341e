use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::roots::{isolate_real_roots, refine_interval, RootValue};
use super::sphere_map_remainder;
use crate::error::{Error, Result};
use crate::exactcore::{rat_to_f64, AnyMap, HoloPoly, RationalMap, WeightedView};
use crate::hermitian::{reduce_table, squared_norm, HermKey, HermPoly, Table};
use crate::sampling::{norm_sq, sphere_point};
use crate::univariate::{GaussPoly, RatPoly};

/// Interval roots are refined to this many bits before numeric validation.
const REFINE_BITS: u32 = 40;
const VALIDATION_SAMPLES: usize = 200;
const VALIDATION_TOLERANCE: f64 = 1e-9;
const VALIDATION_SEED: u64 = 0x0f01_d5ee;

/// Outcome of ∞-fold detection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InftyFold {
    /// ‖f‖² = Σ C_j ‖z‖^{2j}.
    Polynomial { c: Vec<BigRational> },
    /// ‖p‖² = (Σ C_j ‖z‖^{2j})|q|² with nonconstant q: p/q is not reduced.
    ReducibleWitness { c: Vec<BigRational>, denominator: HoloPoly },
}

impl InftyFold {
    pub fn coefficients(&self) -> &[BigRational] {
        match self {
            InftyFold::Polynomial { c } | InftyFold::ReducibleWitness { c, .. } => c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldEntry {
    pub t: RootValue,
    pub big_t: RootValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoldProfile {
    Finite(Vec<FoldEntry>),
    Infinite(Vec<BigRational>),
}

impl FoldProfile {
    pub fn is_infinite(&self) -> bool {
        matches!(self, FoldProfile::Infinite(_))
    }

    /// Finite entries; empty for an ∞-fold profile.
    pub fn entries(&self) -> &[FoldEntry] {
        match self {
            FoldProfile::Finite(e) => e,
            FoldProfile::Infinite(_) => &[],
        }
    }

    /// The exact (t, T) pairs, skipping interval entries.
    pub fn exact_pairs(&self) -> Vec<(BigRational, BigRational)> {
        self.entries()
            .iter()
            .filter_map(|e| match (&e.t, &e.big_t) {
                (RootValue::Exact(t), RootValue::Exact(big_t)) => Some((t.clone(), big_t.clone())),
                _ => None,
            })
            .collect()
    }
}

/// C with Σ C_j ‖z‖^{2j} = ‖p‖², if one exists.
pub fn infty_coefficients(p: &impl WeightedView) -> Option<Vec<BigRational>> {
    let w = p.weighted();
    let n = w.n();
    let m = w.degree().max(0) as u32;
    solve_radial(&squared_norm(p), &HermPoly::one(n), m)
}

/// ∞-fold detection by exact linear elimination.
pub fn detect_infty_fold(f: &AnyMap) -> Result<Option<InftyFold>> {
    let r = f.to_rational();
    r.require_denominator_nonzero_at_origin()?;
    let p2 = squared_norm(r.numerator());
    let d = squared_norm(r.denominator());
    let span = (r.numerator().degree() - r.denominator().degree_i64()).max(0) as u32;
    Ok(solve_radial(&p2, &d, span).map(|c| {
        if r.denominator().is_constant() {
            InftyFold::Polynomial { c }
        } else {
            InftyFold::ReducibleWitness {
                c,
                denominator: r.denominator().clone(),
            }
        }
    }))
}

/// Solves Σ_{j≤span} C_j ‖z‖^{2j}·d = p2 over the rationals.
fn solve_radial(p2: &HermPoly, d: &HermPoly, span: u32) -> Option<Vec<BigRational>> {
    let n = p2.n();
    let cols = span as usize + 1;
    let basis: Vec<HermPoly> = (0..=span).map(|j| HermPoly::norm_z_pow(n, j).mul(d)).collect();
    let keys: BTreeSet<&HermKey> = p2
        .coeffs()
        .keys()
        .chain(basis.iter().flat_map(|b| b.coeffs().keys()))
        .collect();

    // Reduced row echelon rows: (pivot column, row of length cols + 1).
    let mut pivots: Vec<(usize, Vec<BigRational>)> = Vec::new();
    for key in keys {
        let (a, b) = key;
        let rhs = p2.coeff(a, b);
        let entries: Vec<_> = basis.iter().map(|bj| bj.coeff(a, b)).collect();
        for part in 0..2 {
            let pick = |c: &crate::exactcore::CplxRat| if part == 0 { c.re.clone() } else { c.im.clone() };
            let mut row: Vec<BigRational> = entries.iter().map(pick).collect();
            row.push(pick(&rhs));
            for (pc, pr) in &pivots {
                if !row[*pc].is_zero() {
                    let f = row[*pc].clone();
                    for (x, y) in row.iter_mut().zip(pr) {
                        *x -= &f * y;
                    }
                }
            }
            let Some(pc) = (0..cols).find(|&c| !row[c].is_zero()) else {
                if !row[cols].is_zero() {
                    return None;
                }
                continue;
            };
            let lead = row[pc].clone();
            for x in row.iter_mut() {
                *x /= &lead;
            }
            for (_, pr) in pivots.iter_mut() {
                if !pr[pc].is_zero() {
                    let f = pr[pc].clone();
                    for (x, y) in pr.iter_mut().zip(&row) {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push((pc, row));
        }
    }
    let mut c = vec![BigRational::zero(); cols];
    for (pc, row) in &pivots {
        c[*pc] = row[cols].clone();
    }
    let mut total = HermPoly::zero(n);
    for (cj, bj) in c.iter().zip(&basis) {
        total = total.add(&bj.scale(cj));
    }
    if &total != p2 {
        return None;
    }
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    Some(c)
}

/// All zero-centric spheres mapped into zero-centric spheres.
pub fn fold_profile(f: &AnyMap) -> Result<FoldProfile> {
    if let Some(inf) = detect_infty_fold(f)? {
        return Ok(FoldProfile::Infinite(inf.coefficients().to_vec()));
    }
    let r = f.to_rational();
    let n = r.n();
    let x = GaussPoly::x();
    let (_, rem_p) = reduce_table(n, squared_norm(r.numerator()).to_symbolic(), &x, 0);
    let (_, rem_q) = reduce_table(n, squared_norm(r.denominator()).to_symbolic(), &x, 0);

    let g = cross_determinant_gcd(&rem_p, &rem_q);
    if g.is_zero() {
        return Err(Error::Internal(
            "remainders proportional for every t but no radial expansion found".into(),
        ));
    }
    let roots = isolate_real_roots(&g)?;
    let entries: Vec<Option<FoldEntry>> = roots
        .into_par_iter()
        .map(|root| validate_root(&r, &g, &rem_p, &rem_q, root))
        .collect::<Result<_>>()?;
    Ok(FoldProfile::Finite(entries.into_iter().flatten().collect()))
}

/// gcd over all 2×2 minors rem_p[κ₁]·rem_q[κ₂] − rem_p[κ₂]·rem_q[κ₁],
/// real and imaginary parts separately.
fn cross_determinant_gcd(rem_p: &Table<GaussPoly>, rem_q: &Table<GaussPoly>) -> RatPoly {
    let keys: BTreeSet<&HermKey> = rem_p.keys().chain(rem_q.keys()).collect();
    let zero = GaussPoly::zero();
    let mut g = RatPoly::zero();
    for (kq, q2) in rem_q {
        let p2 = rem_p.get(kq).unwrap_or(&zero);
        for &k in &keys {
            if k == kq {
                continue;
            }
            let p1 = rem_p.get(k).unwrap_or(&zero);
            let q1 = rem_q.get(k).unwrap_or(&zero);
            let minor = p1.clone() * q2.clone() - p2.clone() * q1.clone();
            if minor.is_zero() {
                continue;
            }
            g = g.gcd(&minor.re_part()).gcd(&minor.im_part());
            if g.degree() == Some(0) {
                return g;
            }
        }
    }
    g
}

/// Evaluates T = rem_p[κ](t)/rem_q[κ](t) at a key where rem_q(t) ≠ 0.
fn ratio_at(rem_p: &Table<GaussPoly>, rem_q: &Table<GaussPoly>, key: &HermKey, t: &BigRational) -> BigRational {
    let num = rem_p.get(key).map(|p| p.eval_real(t)).unwrap_or_default();
    let den = rem_q[key].eval_real(t);
    (&num / &den).re
}

fn nonvanishing_key<'a>(rem_q: &'a Table<GaussPoly>, points: &[&BigRational]) -> Option<&'a HermKey> {
    rem_q
        .iter()
        .find(|(_, v)| points.iter().all(|t| !v.eval_real(t).is_zero()))
        .map(|(k, _)| k)
}

fn validate_root(
    f: &RationalMap,
    g: &RatPoly,
    rem_p: &Table<GaussPoly>,
    rem_q: &Table<GaussPoly>,
    root: RootValue,
) -> Result<Option<FoldEntry>> {
    let root = match root {
        RootValue::Interval { lo, hi } => refine_interval(g, &lo, &hi, REFINE_BITS),
        exact => exact,
    };
    match root {
        RootValue::Exact(t) => {
            let Some(key) = nonvanishing_key(rem_q, &[&t]) else {
                return Ok(None);
            };
            let num = rem_p.get(key).map(|p| p.eval_real(&t)).unwrap_or_default();
            let ratio = &num / &rem_q[key].eval_real(&t);
            if !ratio.im.is_zero() || !ratio.re.is_positive() {
                return Ok(None);
            }
            let big_t = ratio.re;
            if !sphere_map_remainder(f, &t, &big_t)?.is_zero() {
                return Ok(None);
            }
            Ok(Some(FoldEntry {
                t: RootValue::Exact(t),
                big_t: RootValue::Exact(big_t),
            }))
        }
        RootValue::Interval { lo, hi } => {
            let Some(key) = nonvanishing_key(rem_q, &[&lo, &hi]) else {
                return Ok(None);
            };
            let t_lo = ratio_at(rem_p, rem_q, key, &lo);
            let t_hi = ratio_at(rem_p, rem_q, key, &hi);
            let (big_lo, big_hi) = if t_lo <= t_hi { (t_lo, t_hi) } else { (t_hi, t_lo) };
            if !big_hi.is_positive() {
                return Ok(None);
            }
            let mid = rat_to_f64(&((&lo + &hi) / (BigRational::one() + BigRational::one())));
            if !numerically_constant_on_sphere(f, mid) {
                return Ok(None);
            }
            Ok(Some(FoldEntry {
                t: RootValue::Interval { lo, hi },
                big_t: RootValue::Interval { lo: big_lo, hi: big_hi },
            }))
        }
    }
}

/// ‖f‖² spread over sampled points of the sphere ‖z‖² = t, relative to its size.
fn numerically_constant_on_sphere(f: &RationalMap, t: f64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for _ in 0..VALIDATION_SAMPLES {
        let z = sphere_point(&mut rng, f.n(), t.sqrt());
        let Ok(v) = f.eval_float(&z) else { continue };
        let s = norm_sq(&v);
        lo = lo.min(s);
        hi = hi.max(s);
    }
    lo.is_finite() && hi - lo <= VALIDATION_TOLERANCE * hi.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::{rat, rat_int, CplxRat, MultiIndex, PolyMap, WeightedMap};

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

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn detection_examples() {
        let id = AnyMap::from(PolyMap::identity(2));
        assert_eq!(
            detect_infty_fold(&id).unwrap(),
            Some(InftyFold::Polynomial { c: vec![rat_int(0), rat_int(1)] })
        );
        assert_eq!(
            detect_infty_fold(&AnyMap::from(h2())).unwrap().unwrap().coefficients(),
            &[rat_int(0), rat_int(0), rat_int(1)]
        );
        let p = PolyMap::new(2, vec![HoloPoly::var(2, 0).pow(2), HoloPoly::var(2, 1)]).unwrap();
        assert_eq!(detect_infty_fold(&AnyMap::from(p)).unwrap(), None);
    }

    #[test]
    fn reducible_witness() {
        let q = HoloPoly::affine_one_plus(&[CplxRat::real(rat(1, 2)), CplxRat::zero()]);
        let p = PolyMap::new(2, vec![HoloPoly::var(2, 0).mul(&q), HoloPoly::var(2, 1).mul(&q)]).unwrap();
        let f = RationalMap::new(p, q, false).unwrap();
        assert!(matches!(
            detect_infty_fold(&AnyMap::from(f)).unwrap(),
            Some(InftyFold::ReducibleWitness { .. })
        ));
    }

    #[test]
    fn profile_examples() {
        let p = PolyMap::new(2, vec![HoloPoly::var(2, 0).pow(2), HoloPoly::var(2, 1)]).unwrap();
        assert_eq!(fold_profile(&AnyMap::from(p)).unwrap(), FoldProfile::Finite(vec![]));
        assert_eq!(
            fold_profile(&AnyMap::from(h2())).unwrap(),
            FoldProfile::Infinite(vec![rat_int(0), rat_int(0), rat_int(1)])
        );
    }

    /// Weighted monomial map with ‖p‖² = table entries e_α |z^α|².
    fn diagonal_map(e: &[(&[u32], BigRational)]) -> WeightedMap {
        WeightedMap::from_pairs(
            2,
            e.iter().map(|(a, w)| (w.clone(), HoloPoly::monomial(mi(a), CplxRat::one()))),
        )
        .unwrap()
    }

    #[test]
    fn one_fold_at_unit_sphere() {
        // (1/2)|z₁|²(‖z‖² − 1) + (1 + ‖z‖²)² equals 4 on the unit sphere only.
        let map = diagonal_map(&[
            (&[0, 0], rat_int(1)),
            (&[1, 0], rat(3, 2)),
            (&[0, 1], rat_int(2)),
            (&[2, 0], rat(3, 2)),
            (&[1, 1], rat(5, 2)),
            (&[0, 2], rat_int(1)),
        ]);
        let profile = fold_profile(&AnyMap::from(map)).unwrap();
        assert_eq!(profile.exact_pairs(), vec![(rat_int(1), rat_int(4))]);
        assert_eq!(profile.entries().len(), 1);
    }

    #[test]
    fn irrational_fold_is_an_interval() {
        // |z₁|²(‖z‖⁴ − 2)/c + (1 + ‖z‖²)³ with c = 3 is constant only on t = √2.
        let third = rat(1, 3);
        let mut e: std::collections::BTreeMap<MultiIndex, BigRational> = Default::default();
        let base = HermPoly::one(2).add(&HermPoly::norm_z_sq(2)).pow(3);
        let extra = HermPoly::from_diagonal(2, [(mi(&[1, 0]), rat_int(1))])
            .mul(&HermPoly::norm_z_pow(2, 2).sub(&HermPoly::constant(2, rat_int(2))))
            .scale(&third);
        for ((a, _), c) in base.add(&extra).coeffs() {
            *e.entry(a.clone()).or_default() += c.re.clone();
        }
        let map = WeightedMap::from_pairs(
            2,
            e.into_iter().map(|(a, w)| (w, HoloPoly::monomial(a, CplxRat::one()))),
        )
        .unwrap();
        let profile = fold_profile(&AnyMap::from(map)).unwrap();
        let entries = profile.entries();
        assert_eq!(entries.len(), 1);
        let RootValue::Interval { lo, hi } = &entries[0].t else { panic!("expected interval") };
        assert!(rat_to_f64(lo) < 2f64.sqrt() && 2f64.sqrt() < rat_to_f64(hi));
        let expected_t = (1.0 + 2f64.sqrt()).powi(3);
        assert!((entries[0].big_t.approx() - expected_t).abs() < 1e-6);
    }
}
