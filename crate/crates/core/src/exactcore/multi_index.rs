use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial z^α.
///
/// Ordering is graded: lower total degree first, and within one degree the
/// exponent vectors compare lexicographically with larger leading exponents
/// first, so degree 2 in two variables reads z₁², z₁z₂, z₂².
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` when every exponent stays nonnegative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    pub fn with_added(&self, i: usize, delta: i32) -> Self {
        let mut e = self.0.clone();
        e[i] = (e[i] as i32 + delta) as u32;
        Self(e)
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All multi-indices of length `n` with total degree exactly `d`, in order.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = vec![0u32; n];
        fn rec(pos: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            let n = current.len();
            if pos + 1 == n {
                current[pos] = remaining;
                out.push(MultiIndex(current.clone()));
                return;
            }
            for e in (0..=remaining).rev() {
                current[pos] = e;
                rec(pos + 1, remaining - e, current, out);
            }
            current[pos] = 0;
        }
        if n == 0 {
            if d == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(0, d, &mut current, &mut out);
        out
    }

    pub fn all_up_to_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        (0..=d).flat_map(|k| Self::all_of_degree(n, k)).collect()
    }

    /// Multinomial coefficient |α|! / (α₁!⋯αₙ!).
    pub fn multinomial(&self) -> num_bigint::BigInt {
        let mut result = num_bigint::BigInt::from(1u32);
        let mut running = 0u32;
        for &e in &self.0 {
            for k in 1..=e {
                running += 1;
                result *= running;
                result /= k;
            }
        }
        result
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
