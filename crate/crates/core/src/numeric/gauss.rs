use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{BigRat, NumericError};

/// Exact element `re + im·i` of the Gaussian rationals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct GaussRat {
    pub re: BigRat,
    pub im: BigRat,
}

/// Unreduced encoding of a Gaussian rational as two numerator/denominator
/// pairs, as it may arrive from an external source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawGaussRat {
    pub re_numer: BigInt,
    pub re_denom: BigInt,
    pub im_numer: BigInt,
    pub im_denom: BigInt,
}

impl RawGaussRat {
    pub fn new(re: (i64, i64), im: (i64, i64)) -> Self {
        RawGaussRat { re_numer: re.0.into(), re_denom: re.1.into(), im_numer: im.0.into(), im_denom: im.1.into() }
    }
}

impl From<&GaussRat> for RawGaussRat {
    fn from(value: &GaussRat) -> Self {
        RawGaussRat {
            re_numer: value.re.numer().clone(),
            re_denom: value.re.denom().clone(),
            im_numer: value.im.numer().clone(),
            im_denom: value.im.denom().clone(),
        }
    }
}

/// Reduces both components to lowest terms with positive denominators.
/// Idempotent on already canonical input.
pub fn gauss_canonicalize(raw: &RawGaussRat) -> Result<GaussRat, NumericError> {
    Ok(GaussRat {
        re: BigRat::new(raw.re_numer.clone(), raw.re_denom.clone())?,
        im: BigRat::new(raw.im_numer.clone(), raw.im_denom.clone())?,
    })
}

impl GaussRat {
    pub fn new(re: BigRat, im: BigRat) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRat) -> Self {
        GaussRat { re, im: BigRat::zero() }
    }

    pub fn from_int(value: i64) -> Self {
        GaussRat::real(BigRat::from(value))
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat::new(re.into(), im.into())
    }

    pub fn i() -> Self {
        GaussRat::new(BigRat::zero(), BigRat::one())
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> BigRat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm_sqr().recip()?;
        Some(GaussRat { re: &self.re * &n, im: -(&self.im * &n) })
    }

    pub fn scale(&self, factor: &BigRat) -> Self {
        GaussRat { re: &self.re * factor, im: &self.im * factor }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = GaussRat::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Parses the object form `{"re": "p/q", "im": "r/s"}` strictly.
    pub fn parse_canonical(re: &str, im: &str) -> Result<Self, NumericError> {
        Ok(GaussRat { re: BigRat::parse_canonical(re)?, im: BigRat::parse_canonical(im)? })
    }
}

impl From<BigRat> for GaussRat {
    fn from(value: BigRat) -> Self {
        GaussRat::real(value)
    }
}

impl From<i64> for GaussRat {
    fn from(value: i64) -> Self {
        GaussRat::from_int(value)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im < BigRat::zero() {
            write!(f, "{} - {}i", self.re, -&self.im)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.re, self.im)
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat { re: BigRat::zero(), im: BigRat::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat { re: BigRat::one(), im: BigRat::zero() }
    }
}

impl Add<&GaussRat> for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: GaussRat) -> GaussRat {
        GaussRat { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub<&GaussRat> for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: GaussRat) -> GaussRat {
        &self - &rhs
    }
}

impl Mul<&GaussRat> for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::real(&self.re * &rhs.re);
        }
        GaussRat { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: GaussRat) -> GaussRat {
        &self * &rhs
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -&self.re, im: -&self.im }
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sum for GaussRat {
    fn sum<I: Iterator<Item = GaussRat>>(iter: I) -> Self {
        iter.fold(GaussRat::zero(), |acc, x| acc + x)
    }
}
