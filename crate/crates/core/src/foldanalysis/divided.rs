use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Sphere pairs (t_j = r_j², T_j = R_j²), kept sorted by t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldData {
    pairs: Vec<(BigRational, BigRational)>,
}

impl FoldData {
    /// Sorts by t and rejects nonpositive or duplicate radii.
    pub fn new(mut pairs: Vec<(BigRational, BigRational)>) -> Result<Self> {
        for (t, big_t) in &pairs {
            if !t.is_positive() {
                return Err(Error::NonPositive { what: "t" });
            }
            if !big_t.is_positive() {
                return Err(Error::NonPositive { what: "T" });
            }
        }
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateRadius(w[0].0.to_string()));
        }
        Ok(Self { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(BigRational, BigRational)] {
        &self.pairs
    }

    pub fn t(&self, j: usize) -> &BigRational {
        &self.pairs[j].0
    }

    pub fn big_t(&self, j: usize) -> &BigRational {
        &self.pairs[j].1
    }
}

/// b_j = [R₁², …, R_{j+1}²].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DividedDifferences {
    pub b: Vec<BigRational>,
}

/// Newton divided differences of the data (t_j, T_j), computed in place:
/// level j replaces entry ℓ > j by (f_ℓ − f_j)/(t_ℓ − t_j).
pub fn divided_differences(folds: &FoldData) -> Result<DividedDifferences> {
    let k = folds.len();
    let mut f: Vec<BigRational> = folds.pairs.iter().map(|(_, big_t)| big_t.clone()).collect();
    let mut b = Vec::with_capacity(k);
    for j in 0..k {
        b.push(f[j].clone());
        for l in j + 1..k {
            let dt = folds.t(l) - folds.t(j);
            if dt.is_zero() {
                return Err(Error::DuplicateRadius(folds.t(l).to_string()));
            }
            f[l] = (&f[l] - &f[j]) / dt;
        }
    }
    Ok(DividedDifferences { b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::{rat, rat_int};

    fn data(pairs: &[(i64, i64)]) -> FoldData {
        FoldData::new(pairs.iter().map(|&(t, big)| (rat_int(t), rat_int(big))).collect()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(divided_differences(&data(&[(1, 5)])).unwrap().b, vec![rat_int(5)]);
        assert_eq!(
            divided_differences(&data(&[(1, 1), (4, 9)])).unwrap().b,
            vec![rat_int(1), rat(8, 3)]
        );
        assert_eq!(
            divided_differences(&data(&[(1, 1), (2, 2), (3, 3)])).unwrap().b,
            vec![rat_int(1), rat_int(1), rat_int(0)]
        );
    }

    #[test]
    fn duplicates_rejected() {
        let r = FoldData::new(vec![(rat_int(1), rat_int(1)), (rat_int(1), rat_int(2))]);
        assert!(matches!(r, Err(Error::DuplicateRadius(_))));
        assert!(FoldData::new(vec![(rat_int(0), rat_int(1))]).is_err());
    }
}
