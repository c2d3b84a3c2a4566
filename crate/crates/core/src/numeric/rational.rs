use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::NumericError;

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigRat(BigRational);

impl BigRat {
    /// Builds `numer / denom`, reducing to lowest terms.
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self, NumericError> {
        if denom.is_zero() {
            return Err(NumericError::ZeroDenominator);
        }
        Ok(BigRat(BigRational::new(numer, denom)))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        BigRat(BigRational::from_integer(value.into()))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::new(numer.into(), denom.into()).expect("denominator must be nonzero")
    }

    pub fn recip_of(n: u64) -> Self {
        Self::from_ratio(1, n as i64)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        BigRat(self.0.abs())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(BigRat(self.0.recip()))
        }
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn pow(&self, exp: u32) -> Self {
        BigRat(num_traits::pow(self.0.clone(), exp as usize))
    }

    pub fn to_f64(&self) -> f64 {
        // Plain division loses everything once numerator or denominator
        // exceed the f64 range, so scale both to a common exponent first.
        let n = self.numer();
        let d = self.denom();
        match (n.to_f64(), d.to_f64()) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
            _ => {
                let shift = n.bits().max(d.bits()).saturating_sub(1000);
                let a = (n >> shift).to_f64().unwrap_or(f64::NAN);
                let b = (d >> shift).to_f64().unwrap_or(f64::NAN);
                a / b
            }
        }
    }

    /// Parses the wire format `p/q` and rejects anything that is not already
    /// in lowest terms with a positive denominator.
    pub fn parse_canonical(text: &str) -> Result<Self, NumericError> {
        let (numer, denom) = split_fraction(text)?;
        if denom.is_zero() {
            return Err(NumericError::ZeroDenominator);
        }
        if denom.sign() != Sign::Plus {
            return Err(NumericError::NonCanonical(text.to_string()));
        }
        let value = BigRat::new(numer.clone(), denom.clone())?;
        if value.numer() != &numer || value.denom() != &denom {
            return Err(NumericError::NonCanonical(text.to_string()));
        }
        Ok(value)
    }

    /// Parses `p/q` or `p`, reducing whatever it is given.
    pub fn parse_lenient(text: &str) -> Result<Self, NumericError> {
        let (numer, denom) = split_fraction(text)?;
        BigRat::new(numer, denom)
    }

    /// The `p/q` wire form. Integers still carry `/1`.
    pub fn to_wire(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

fn split_fraction(text: &str) -> Result<(BigInt, BigInt), NumericError> {
    let trimmed = text.trim();
    let normalized = trimmed.replace('\u{2212}', "-");
    let bad = || NumericError::Malformed(text.to_string());
    let (n, d) = match normalized.split_once('/') {
        Some((n, d)) => (n.to_string(), d.to_string()),
        None => (normalized.clone(), "1".to_string()),
    };
    if n.is_empty() || d.is_empty() || n.contains('+') || d.contains('+') {
        return Err(bad());
    }
    let numer = BigInt::from_str(&n).map_err(|_| bad())?;
    let denom = BigInt::from_str(&d).map_err(|_| bad())?;
    Ok((numer, denom))
}

impl From<i64> for BigRat {
    fn from(value: i64) -> Self {
        BigRat::from_integer(value)
    }
}

impl From<BigInt> for BigRat {
    fn from(value: BigInt) -> Self {
        BigRat::from_integer(value)
    }
}

impl From<BigUint> for BigRat {
    fn from(value: BigUint) -> Self {
        BigRat::from_integer(BigInt::from(value))
    }
}

impl fmt::Display for BigRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for BigRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_wire())
    }
}

impl FromStr for BigRat {
    type Err = NumericError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigRat::parse_canonical(s)
    }
}

impl Serialize for BigRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_wire())
    }
}

impl<'de> Deserialize<'de> for BigRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        BigRat::parse_canonical(&text).map_err(serde::de::Error::custom)
    }
}

impl Zero for BigRat {
    fn zero() -> Self {
        BigRat(BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for BigRat {
    fn one() -> Self {
        BigRat(BigRational::one())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&BigRat> for &BigRat {
            type Output = BigRat;
            fn $method(self, rhs: &BigRat) -> BigRat {
                BigRat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<BigRat> for BigRat {
            type Output = BigRat;
            fn $method(self, rhs: BigRat) -> BigRat {
                BigRat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&BigRat> for BigRat {
            type Output = BigRat;
            fn $method(self, rhs: &BigRat) -> BigRat {
                BigRat(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div<&BigRat> for &BigRat {
    type Output = BigRat;
    fn div(self, rhs: &BigRat) -> BigRat {
        assert!(!rhs.is_zero(), "division by zero rational");
        BigRat(&self.0 / &rhs.0)
    }
}

impl Div<BigRat> for BigRat {
    type Output = BigRat;
    fn div(self, rhs: BigRat) -> BigRat {
        &self / &rhs
    }
}

impl Neg for BigRat {
    type Output = BigRat;
    fn neg(self) -> BigRat {
        BigRat(-self.0)
    }
}

impl Neg for &BigRat {
    type Output = BigRat;
    fn neg(self) -> BigRat {
        BigRat(-&self.0)
    }
}

impl AddAssign<&BigRat> for BigRat {
    fn add_assign(&mut self, rhs: &BigRat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&BigRat> for BigRat {
    fn sub_assign(&mut self, rhs: &BigRat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&BigRat> for BigRat {
    fn mul_assign(&mut self, rhs: &BigRat) {
        self.0 *= &rhs.0;
    }
}

impl Sum for BigRat {
    fn sum<I: Iterator<Item = BigRat>>(iter: I) -> Self {
        iter.fold(BigRat::zero(), |acc, x| acc + x)
    }
}

impl Product for BigRat {
    fn product<I: Iterator<Item = BigRat>>(iter: I) -> Self {
        iter.fold(BigRat::one(), |acc, x| acc * x)
    }
}
