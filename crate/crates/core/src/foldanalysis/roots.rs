//! Positive real root isolation with Sturm sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::univariate::{sign_variations, RatPoly};

/// A positive real root, exact when rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootValue {
    Exact(BigRational),
    /// The open interval (lo, hi) holds exactly one root, which is irrational.
    Interval { lo: BigRational, hi: BigRational },
}

impl RootValue {
    pub fn approx(&self) -> f64 {
        match self {
            RootValue::Exact(v) => crate::exactcore::rat_to_f64(v),
            RootValue::Interval { lo, hi } => crate::exactcore::rat_to_f64(&((lo + hi) / BigRational::from_integer(2.into()))),
        }
    }

    fn sort_key(&self) -> &BigRational {
        match self {
            RootValue::Exact(v) => v,
            RootValue::Interval { lo, .. } => lo,
        }
    }
}

/// All real roots of `u` in (0, ∞), sorted ascending.
pub fn isolate_real_roots(u: &RatPoly) -> Result<Vec<RootValue>> {
    if u.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut p = u.clone();
    while p.degree().unwrap_or(0) > 0 && p.coeff(0).is_zero() {
        p = p.div_rem(&RatPoly::x()).0;
    }
    let s = p.square_free();
    if s.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let chain = s.sturm_chain();
    let lead = lead_integer(&s);
    let mut stack = vec![(BigRational::zero(), s.cauchy_bound())];
    let mut roots = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_variations(&chain, &lo) - sign_variations(&chain, &hi);
        match count {
            0 => {}
            1 => roots.push(classify(&s, &lead, lo, hi)),
            _ => {
                let mid = midpoint(&lo, &hi);
                if s.sign_at(&mid) == 0 {
                    let (a, b) = separate(&s, &chain, &lo, &mid, &hi);
                    roots.push(RootValue::Exact(mid));
                    stack.push((lo, a));
                    stack.push((b, hi));
                } else {
                    stack.push((lo, mid.clone()));
                    stack.push((mid, hi));
                }
            }
        }
    }
    roots.sort_by(|a, b| a.sort_key().cmp(b.sort_key()));
    Ok(roots)
}

/// Narrows an isolating interval of `u` to width at most 2^−bits.
pub fn refine_interval(u: &RatPoly, lo: &BigRational, hi: &BigRational, bits: u32) -> RootValue {
    let s = u.square_free();
    let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let lo_sign = s.sign_at(&lo);
    while &hi - &lo > width {
        let mid = midpoint(&lo, &hi);
        let sm = s.sign_at(&mid);
        if sm == 0 {
            return RootValue::Exact(mid);
        }
        if sm == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RootValue::Interval { lo, hi }
}

fn midpoint(lo: &BigRational, hi: &BigRational) -> BigRational {
    (lo + hi) / BigRational::from_integer(BigInt::from(2))
}

fn lead_integer(s: &RatPoly) -> BigInt {
    s.primitive_integer().last().cloned().unwrap_or_else(BigInt::one).abs()
}

/// Shrinks a window around the exact root `mid` until it holds no other root.
fn separate(
    s: &RatPoly,
    chain: &[RatPoly],
    lo: &BigRational,
    mid: &BigRational,
    hi: &BigRational,
) -> (BigRational, BigRational) {
    let mut delta = (hi - lo) / BigRational::from_integer(BigInt::from(4));
    loop {
        let a = mid - &delta;
        let b = mid + &delta;
        if s.sign_at(&a) != 0
            && s.sign_at(&b) != 0
            && sign_variations(chain, &a) - sign_variations(chain, &b) == 1
        {
            return (a, b);
        }
        delta /= BigRational::from_integer(BigInt::from(2));
    }
}

/// A rational root of the primitive form of s has the shape k/lead; shrink
/// the interval below width 1/lead and test the (at most two) candidates.
fn classify(s: &RatPoly, lead: &BigInt, lo: BigRational, hi: BigRational) -> RootValue {
    let step = BigRational::new(BigInt::one(), lead.clone());
    let (mut lo, mut hi) = (lo, hi);
    let lo_sign = s.sign_at(&lo);
    while &hi - &lo >= step {
        let mid = midpoint(&lo, &hi);
        let sm = s.sign_at(&mid);
        if sm == 0 {
            return RootValue::Exact(mid);
        }
        if sm == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lo_scaled = &lo * BigRational::from_integer(lead.clone());
    let hi_scaled = &hi * BigRational::from_integer(lead.clone());
    let mut k = lo_scaled.ceil().to_integer();
    let last = hi_scaled.floor().to_integer();
    while k <= last {
        let candidate = BigRational::new(k.clone(), lead.clone());
        if s.sign_at(&candidate) == 0 {
            return RootValue::Exact(candidate);
        }
        k += 1;
    }
    RootValue::Interval { lo, hi }
}
