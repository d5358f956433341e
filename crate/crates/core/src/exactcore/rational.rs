//! Gaussian rationals and helpers for arbitrary-precision rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Shorthand for building a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

pub fn rat_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Fall back on a scaled division for values outside the direct range.
        let num = value.numer().to_f64().unwrap_or(f64::INFINITY);
        let den = value.denom().to_f64().unwrap_or(f64::INFINITY);
        num / den
    })
}

/// Canonical "num/den" form; integers print without a denominator.
pub fn format_rational(value: &BigRational) -> String {
    value.to_string()
}

/// Parses "num/den" or "num". Non-reduced input is accepted and reduced.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad rational {text:?}")))?;
    let den = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad rational {text:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Returns the rational square root when `value` is a perfect square.
pub fn rational_sqrt(value: &BigRational) -> Option<BigRational> {
    if value.is_negative() {
        return None;
    }
    let num = value.numer().sqrt();
    let den = value.denom().sqrt();
    if &(&num * &num) == value.numer() && &(&den * &den) == value.denom() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

/// Exact complex number with rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CplxRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl CplxRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(rat_int(re), rat_int(im))
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// |z|², always a nonnegative rational.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(&self.re * factor, &self.im * factor)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "inverse of zero");
        Self::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Sum of |re| + |im|, a cheap magnitude bound used for pole margins.
    pub fn abs_bound(&self) -> f64 {
        rat_to_f64(&self.re).abs() + rat_to_f64(&self.im).abs()
    }
}

impl fmt::Display for CplxRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl From<BigRational> for CplxRat {
    fn from(re: BigRational) -> Self {
        Self::real(re)
    }
}

impl Zero for CplxRat {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for CplxRat {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl<'a> Add<&'a CplxRat> for &'a CplxRat {
    type Output = CplxRat;
    fn add(self, rhs: &CplxRat) -> CplxRat {
        CplxRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a CplxRat> for &'a CplxRat {
    type Output = CplxRat;
    fn sub(self, rhs: &CplxRat) -> CplxRat {
        CplxRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a CplxRat> for &'a CplxRat {
    type Output = CplxRat;
    fn mul(self, rhs: &CplxRat) -> CplxRat {
        CplxRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a CplxRat> for &'a CplxRat {
    type Output = CplxRat;
    fn div(self, rhs: &CplxRat) -> CplxRat {
        self * &rhs.inv()
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<CplxRat> for CplxRat {
            type Output = CplxRat;
            fn $method(self, rhs: CplxRat) -> CplxRat {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for CplxRat {
    type Output = CplxRat;
    fn neg(self) -> CplxRat {
        CplxRat::new(-self.re, -self.im)
    }
}

impl Neg for &CplxRat {
    type Output = CplxRat;
    fn neg(self) -> CplxRat {
        CplxRat::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&CplxRat> for CplxRat {
    fn add_assign(&mut self, rhs: &CplxRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&CplxRat> for CplxRat {
    fn sub_assign(&mut self, rhs: &CplxRat) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&CplxRat> for CplxRat {
    fn mul_assign(&mut self, rhs: &CplxRat) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_after_arithmetic() {
        let a = CplxRat::new(rat(2, 4), rat(-3, 9));
        assert_eq!(a.re, rat(1, 2));
        assert_eq!(a.im.denom(), &BigInt::from(3));
        let b = &a * &a.inv();
        assert_eq!(b, CplxRat::one());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/8").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-5").unwrap(), rat_int(-5));
        assert_eq!(format_rational(&rat(3, 4)), "3/4");
        assert_eq!(format_rational(&rat_int(7)), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn perfect_square_roots() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        assert_eq!(rational_sqrt(&rat(-1, 1)), None);
    }

    #[test]
    fn quarter_turn() {
        let i = CplxRat::i();
        assert_eq!(&i * &i, -CplxRat::one());
        assert_eq!(i.norm_sq(), rat_int(1));
    }
}
