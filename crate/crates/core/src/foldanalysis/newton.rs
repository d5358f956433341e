use num_traits::Zero;

use super::divided::{divided_differences, DividedDifferences, FoldData};
use super::reduced::probably_reduced;
use crate::error::{Error, Result};
use crate::exactcore::{RationalMap, WeightedView};
use crate::hermitian::{squared_norm, HermPoly};

/// Seed for the line restrictions of the reducedness check.
pub(crate) const REDUCEDNESS_SEED: u64 = 0x5eed_f01d;

/// ‖p‖² = Σ_{j<k} b_j Π_{i<j}(‖z‖² − t_i)·D + Q_k Π_{i<k}(‖z‖² − t_i),
/// with D = |q|² for rational maps and D = 1 for polynomial maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonExpansion {
    pub folds: FoldData,
    pub b: DividedDifferences,
    /// Q₁ … Q_k.
    pub intermediates: Vec<HermPoly>,
    /// Q_k.
    pub remainder: HermPoly,
    pub denom_norm_sq: Option<HermPoly>,
    /// (j, m − j) for every j with b_j ≠ 0; empty for n = 1.
    pub degree_certificates: Vec<(usize, i64)>,
}

impl NewtonExpansion {
    /// Expands the right-hand side of the Newton identity.
    pub fn reconstruct(&self) -> HermPoly {
        let n = self.remainder.n();
        let d = self.denom_norm_sq.clone().unwrap_or_else(|| HermPoly::one(n));
        let mut acc = HermPoly::zero(n);
        let mut prod = HermPoly::one(n);
        for (j, bj) in self.b.b.iter().enumerate() {
            acc = acc.add(&prod.mul(&d).scale(bj));
            prod = prod.mul(&HermPoly::sphere_divisor(n, self.folds.t(j)));
        }
        acc.add(&prod.mul(&self.remainder))
    }
}

/// Newton expansion of ‖p‖² along the claimed folds.
pub fn newton_expand_poly(p: &impl WeightedView, folds: &FoldData) -> Result<NewtonExpansion> {
    let m = p.weighted().degree();
    let q0 = squared_norm(p);
    expand(q0, None, folds, m, 0)
}

/// Newton expansion of ‖p‖² against |q|² for f = p/q.
pub fn newton_expand_rational(f: &RationalMap, folds: &FoldData) -> Result<NewtonExpansion> {
    f.require_denominator_nonzero_at_origin()?;
    if !probably_reduced(f, REDUCEDNESS_SEED) {
        return Err(Error::NotReduced);
    }
    let q0 = squared_norm(f.numerator());
    let d = squared_norm(f.denominator());
    let deg_q = f.denominator().degree_i64();
    expand(q0, Some(d), folds, f.degree(), deg_q)
}

fn expand(q0: HermPoly, d: Option<HermPoly>, folds: &FoldData, m: i64, deg_q: i64) -> Result<NewtonExpansion> {
    let n = q0.n();
    let b = divided_differences(folds)?;
    let mut current = q0.clone();
    let mut intermediates = Vec::with_capacity(folds.len());
    for (j, bj) in b.b.iter().enumerate() {
        let step = j + 1;
        let t = folds.t(j);
        let subtract = match &d {
            Some(d) => d.scale(bj),
            None => HermPoly::constant(n, bj.clone()),
        };
        let red = current.sub(&subtract).reduce_mod_sphere(t)?;
        if !red.remainder.is_zero() {
            let reason = match (&d, current.constant_on_sphere(t)?) {
                (None, Some(c)) => format!("constant {c} on sphere t = {t} differs from predicted {bj}"),
                (None, None) => format!("squared norm is not constant on sphere t = {t}"),
                (Some(_), _) => format!("not proportional to |q|² with factor {bj} on sphere t = {t}"),
            };
            return Err(Error::NotAFold {
                step,
                reason,
                witness: Box::new(red.remainder),
            });
        }
        current = red.quotient;
        let cap = (m - step as i64).max(-1);
        let (d1, d2) = current.bidegree();
        if d1 > cap || d2 > cap {
            return Err(Error::Internal(format!(
                "Q_{step} has bidegree ({d1}, {d2}) above ({cap}, {cap})"
            )));
        }
        intermediates.push(current.clone());
    }

    let mut degree_certificates = Vec::new();
    if n >= 2 {
        for (j, bj) in b.b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let bound = m - j as i64;
            degree_certificates.push((j, bound));
            if deg_q > bound {
                return Err(Error::DegreeViolation {
                    step: j,
                    bound,
                    denominator_degree: deg_q,
                });
            }
        }
        if d.is_some() && folds.len() >= 2 && deg_q >= m {
            return Err(Error::DegreeViolation {
                step: 1,
                bound: m - 1,
                denominator_degree: deg_q,
            });
        }
    }

    let expansion = NewtonExpansion {
        folds: folds.clone(),
        b,
        remainder: current,
        intermediates,
        denom_norm_sq: d,
        degree_certificates,
    };
    if expansion.reconstruct() != q0 {
        return Err(Error::Internal("Newton reconstruction mismatch".into()));
    }
    Ok(expansion)
}
