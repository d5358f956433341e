//! Normal form f = U(h₁ ⊕ ⋯ ⊕ h_k ⊕ 0) of a polynomial map taking every
//! zero-centric sphere to a zero-centric sphere.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactcore::{map_direct_sum, rat_to_f64, MultiIndex, WeightedMap, WeightedView};
use crate::factory::homogeneous_map;
use crate::foldanalysis::infty_coefficients;
use crate::hermitian::squared_norm;

const RESIDUAL_TOLERANCE: f64 = 1e-9;
const UNITARY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct NormalForm {
    /// ‖f‖² = Σ C_j ‖z‖^{2j}.
    pub c: Vec<BigRational>,
    /// Degrees d_j with C_{d_j} > 0, ascending.
    pub degrees: Vec<u32>,
    /// h_j = homogeneous_map(n, d_j, C_{d_j}).
    pub blocks: Vec<WeightedMap>,
    /// ℓ_j = number of components of h_j.
    pub ell: Vec<usize>,
    pub u: DMatrix<Complex64>,
    /// Exact equality of the squared norms of f and h₁ ⊕ ⋯ ⊕ h_k.
    pub gram_certificate: bool,
    /// max |F − U·H_padded| over coefficients.
    pub residual: f64,
    /// max |U*U − I|.
    pub unitarity_defect: f64,
}

impl NormalForm {
    /// h₁ ⊕ ⋯ ⊕ h_k.
    pub fn stacked_blocks(&self) -> Result<WeightedMap> {
        let n = self.blocks.first().map_or(1, WeightedMap::n);
        let mut acc = WeightedMap::new(n, Vec::new())?;
        for b in &self.blocks {
            acc = map_direct_sum(&acc, b)?;
        }
        Ok(acc)
    }
}

/// Float coefficient matrix (rows = components, columns = monomials) with
/// √weight applied.
fn coefficient_matrix(w: &WeightedMap, columns: &BTreeMap<MultiIndex, usize>) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(w.target_dim(), columns.len());
    for (i, e) in w.entries().iter().enumerate() {
        let s = rat_to_f64(&e.weight).sqrt();
        for (a, c) in e.poly.terms() {
            m[(i, columns[a])] = c.to_complex64() * s;
        }
    }
    m
}

/// Computes C, the homogeneous blocks and a unitary U with f = U(⊕h_j ⊕ 0).
pub fn decompose_infty_fold(f: &impl WeightedView) -> Result<NormalForm> {
    let w = f.weighted().into_owned();
    let n = w.n();
    let c = infty_coefficients(&w).ok_or(Error::NotInftyFold)?;

    let mut degrees = Vec::new();
    let mut blocks = Vec::new();
    for (j, cj) in c.iter().enumerate() {
        if cj.is_positive() {
            degrees.push(j as u32);
            blocks.push(homogeneous_map(n, j as u32, cj)?);
        } else if cj.is_negative() {
            return Err(Error::Internal(format!("negative coefficient C_{j} = {cj}")));
        }
    }
    let ell: Vec<usize> = blocks.iter().map(WeightedMap::target_dim).collect();
    let mut h = WeightedMap::new(n, Vec::new())?;
    for b in &blocks {
        h = map_direct_sum(&h, b)?;
    }

    let gram_certificate = squared_norm(&w) == squared_norm(&h);
    if !gram_certificate {
        return Err(Error::GramMismatch(
            "squared norms of f and of the block sum differ".into(),
        ));
    }

    // Drop identically zero components; they return as ⊕ 0 padding.
    let nonzero: Vec<usize> = (0..w.target_dim())
        .filter(|&i| !w.entries()[i].poly.is_zero())
        .collect();
    let zero_rows: Vec<usize> = (0..w.target_dim())
        .filter(|&i| w.entries()[i].poly.is_zero())
        .collect();
    let total = w.target_dim();
    let l = h.target_dim();
    if l > nonzero.len() {
        return Err(Error::Internal(format!(
            "{l} block rows exceed {} nonzero components",
            nonzero.len()
        )));
    }

    let mut columns = BTreeMap::new();
    for e in w.entries().iter().chain(h.entries()) {
        for a in e.poly.terms().keys() {
            let next = columns.len();
            columns.entry(a.clone()).or_insert(next);
        }
    }
    let f_full = coefficient_matrix(&w, &columns);
    let h_mat = coefficient_matrix(&h, &columns);
    let f_nz = f_full.select_rows(nonzero.iter());

    // Each block row of H is supported on a single monomial, so the matching
    // column of X is F[:, α]/h_α.
    let mut x = DMatrix::<Complex64>::zeros(nonzero.len(), l);
    for (r, e) in h.entries().iter().enumerate() {
        let (a, coeff) = e.poly.terms().iter().next().expect("monomial block row");
        let scale = coeff.to_complex64() * rat_to_f64(&e.weight).sqrt();
        let col = columns[a];
        for i in 0..nonzero.len() {
            x[(i, r)] = f_nz[(i, col)] / scale;
        }
    }
    let completed = unitary_extend(&x.adjoint())?;
    let u_nz = completed.adjoint();

    let mut u = DMatrix::<Complex64>::zeros(total, total);
    for (a, &row) in nonzero.iter().enumerate() {
        for b in 0..nonzero.len() {
            u[(row, b)] = u_nz[(a, b)];
        }
    }
    for (k, &row) in zero_rows.iter().enumerate() {
        u[(row, nonzero.len() + k)] = Complex64::new(1.0, 0.0);
    }

    let mut h_padded = DMatrix::<Complex64>::zeros(total, columns.len());
    h_padded.rows_mut(0, l).copy_from(&h_mat);
    let residual = (&f_full - &u * &h_padded).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let unitarity_defect = unitarity_defect(&u);
    if residual >= RESIDUAL_TOLERANCE || unitarity_defect >= UNITARY_TOLERANCE {
        return Err(Error::Internal(format!(
            "normal form residual {residual:e}, unitarity defect {unitarity_defect:e}"
        )));
    }
    Ok(NormalForm {
        c,
        degrees,
        blocks,
        ell,
        u,
        gram_certificate,
        residual,
        unitarity_defect,
    })
}

fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let id = DMatrix::<Complex64>::identity(u.ncols(), u.ncols());
    (u.adjoint() * u - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Completes orthonormal rows V (r × N) to an N × N unitary whose first r
/// rows are V, adding standard basis vectors in index order after two
/// rounds of Gram–Schmidt.
pub fn unitary_extend(v: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let (r, n) = v.shape();
    if r > n {
        return Err(Error::InvalidParameter(format!("{r} rows exceed dimension {n}")));
    }
    let gram = v * v.adjoint();
    let deviation = (gram - DMatrix::<Complex64>::identity(r, r))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if deviation > UNITARY_TOLERANCE {
        return Err(Error::RowsNotOrthonormal { deviation });
    }
    let mut rows: Vec<Vec<Complex64>> = (0..r).map(|i| v.row(i).iter().copied().collect()).collect();
    // Some basis vector always keeps at least 1/√N of its length.
    let threshold = 0.5 / (n as f64).sqrt();
    for i in 0..n {
        if rows.len() == n {
            break;
        }
        let mut x = vec![Complex64::zero(); n];
        x[i] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for row in &rows {
                let dot: Complex64 = x.iter().zip(row).map(|(a, b)| a * b.conj()).sum();
                for (xk, rk) in x.iter_mut().zip(row) {
                    *xk -= dot * rk;
                }
            }
        }
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > threshold {
            rows.push(x.into_iter().map(|z| z / norm).collect());
        }
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::{rat_int, CplxRat, HoloPoly, PolyMap};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_normal_form() {
        let nf = decompose_infty_fold(&PolyMap::identity(2)).unwrap();
        assert_eq!(nf.c, vec![rat_int(0), rat_int(1)]);
        assert_eq!(nf.ell, vec![2]);
        assert!(nf.gram_certificate);
        let id = DMatrix::<Complex64>::identity(2, 2);
        assert!((&nf.u - id).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn homogeneous_square() {
        let h2 = homogeneous_map(2, 2, &rat_int(1)).unwrap();
        let nf = decompose_infty_fold(&h2).unwrap();
        assert_eq!(nf.c, vec![rat_int(0), rat_int(0), rat_int(1)]);
        assert_eq!(nf.ell, vec![3]);
        let id = DMatrix::<Complex64>::identity(3, 3);
        assert!((&nf.u - id).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn zero_components_become_padding() {
        let p = PolyMap::new(2, vec![HoloPoly::zero(2), HoloPoly::var(2, 1), HoloPoly::var(2, 0)]).unwrap();
        let nf = decompose_infty_fold(&p).unwrap();
        assert_eq!(nf.u.shape(), (3, 3));
        assert!(nf.residual < 1e-12);
    }

    #[test]
    fn not_infty_fold() {
        let p = PolyMap::new(2, vec![HoloPoly::var(2, 0).pow(2), HoloPoly::var(2, 1)]).unwrap();
        assert!(matches!(decompose_infty_fold(&p), Err(Error::NotInftyFold)));
    }

    #[test]
    fn phases_and_swap_recovered() {
        // (i z₂, z₁) = U·(z₁, z₂) with U = [[0, i], [1, 0]].
        let p = PolyMap::new(2, vec![HoloPoly::var(2, 1).scale(&CplxRat::i()), HoloPoly::var(2, 0)]).unwrap();
        let nf = decompose_infty_fold(&p).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., 1.), c(1., 0.), c(0., 0.)]);
        assert!((&nf.u - expected).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn extend_examples() {
        let v = DMatrix::from_row_slice(1, 2, &[c(1., 0.), c(0., 0.)]);
        let u = unitary_extend(&v).unwrap();
        assert!((u - DMatrix::<Complex64>::identity(2, 2)).iter().all(|z| z.norm() < 1e-15));

        let s = 0.5f64.sqrt();
        let v = DMatrix::from_row_slice(1, 2, &[c(s, 0.), c(s, 0.)]);
        let u = unitary_extend(&v).unwrap();
        assert!((u[(1, 0)] - c(s, 0.)).norm() < 1e-12 && (u[(1, 1)] + c(s, 0.)).norm() < 1e-12);

        let v = DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(1., 0.), c(0., 0.)]);
        assert!(matches!(unitary_extend(&v), Err(Error::RowsNotOrthonormal { .. })));
    }
}
