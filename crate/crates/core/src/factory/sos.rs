//! Exact LDL* factorization of hermitian coefficient matrices.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactcore::{CplxRat, HoloPoly, MultiIndex, WeightedEntry, WeightedMap};
use crate::hermitian::HermPoly;

/// v with v*·(Q)·v < 0 over the listed monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotPsdWitness {
    pub basis: Vec<MultiIndex>,
    pub vector: Vec<CplxRat>,
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SosOutcome {
    Sos(WeightedMap),
    NotPsd(NotPsdWitness),
}

/// One LDL* step: pivot weight d and the column ℓ with ℓ_pivot = 1.
pub(crate) struct Pivot {
    pub weight: BigRational,
    pub column: Vec<CplxRat>,
}

/// Factors the coefficient matrix of `q` over `basis`. Returns the pivots
/// (zero rows are skipped) or a witness of indefiniteness.
pub(crate) fn ldl(q: &HermPoly, basis: &[MultiIndex]) -> Result<Vec<Pivot>, NotPsdWitness> {
    let r = basis.len();
    let mut a: Vec<Vec<CplxRat>> = basis
        .iter()
        .map(|x| basis.iter().map(|y| q.coeff(x, y)).collect())
        .collect();
    // Invariant: a = e·M·e* on the remaining indices, M the original matrix.
    let mut e: Vec<Vec<CplxRat>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { CplxRat::one() } else { CplxRat::zero() }).collect())
        .collect();
    let mut remaining: Vec<usize> = (0..r).collect();
    let mut pivots = Vec::new();

    let witness = |e: &[Vec<CplxRat>], w: &[(usize, CplxRat)], value: BigRational| {
        let vector: Vec<CplxRat> = (0..r)
            .map(|col| {
                w.iter()
                    .fold(CplxRat::zero(), |acc, (k, wk)| &acc + &(wk * &e[*k][col].conj()))
            })
            .collect();
        debug_assert_eq!(q.form_value(basis, &vector), value);
        NotPsdWitness {
            basis: basis.to_vec(),
            vector,
            value,
        }
    };

    while !remaining.is_empty() {
        let mut best = remaining[0];
        for &i in &remaining {
            if a[i][i].re.abs() > a[best][best].re.abs() {
                best = i;
            }
        }
        let p = best;
        let d = a[p][p].re.clone();
        if d.is_negative() {
            return Err(witness(&e, &[(p, CplxRat::one())], d));
        }
        if d.is_zero() {
            // Every remaining diagonal entry is zero.
            for &i in &remaining {
                if let Some(&j) = remaining.iter().find(|&&j| j != i && !a[i][j].is_zero()) {
                    let aij = a[i][j].clone();
                    let s = -aij.conj();
                    let value = -(aij.norm_sq() + aij.norm_sq());
                    return Err(witness(&e, &[(i, CplxRat::one()), (j, s)], value));
                }
            }
            break;
        }
        let inv = CplxRat::real(BigRational::one() / &d);
        let mut column = vec![CplxRat::zero(); r];
        for &i in &remaining {
            column[i] = &a[i][p] * &inv;
        }
        remaining.retain(|&i| i != p);
        for &i in &remaining {
            for &j in &remaining {
                let delta = &column[i] * &a[p][j];
                a[i][j] -= &delta;
            }
            let li = column[i].clone();
            if !li.is_zero() {
                for col in 0..r {
                    let delta = &li * &e[p][col];
                    e[i][col] -= &delta;
                }
            }
        }
        pivots.push(Pivot { weight: d, column });
    }
    Ok(pivots)
}

/// Σ d_j |v_j(z)|² = Q exactly, or a witness that the coefficient matrix
/// is not positive semidefinite.
pub fn sos_decompose(q: &HermPoly) -> SosOutcome {
    let basis = q.monomial_basis();
    match ldl(q, &basis) {
        Err(w) => SosOutcome::NotPsd(w),
        Ok(pivots) => {
            let entries = pivots
                .into_iter()
                .map(|pv| WeightedEntry {
                    weight: pv.weight,
                    poly: HoloPoly::from_terms(q.n(), basis.iter().cloned().zip(pv.column))
                        .expect("basis shares the dimension of q"),
                })
                .collect();
            SosOutcome::Sos(WeightedMap::new(q.n(), entries).expect("pivots are positive"))
        }
    }
}
