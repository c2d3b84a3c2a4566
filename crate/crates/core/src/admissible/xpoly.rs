use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::AdmissibleError;
use crate::numeric::{BigRat, GaussRat};

/// Polynomial in `l` cube variables with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XPoly {
    arity: usize,
    terms: BTreeMap<Vec<u32>, GaussRat>,
}

impl XPoly {
    pub fn zero(arity: usize) -> Self {
        XPoly { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        XPoly::constant(GaussRat::one(), arity)
    }

    pub fn constant(c: GaussRat, arity: usize) -> Self {
        let mut p = XPoly::zero(arity);
        p.add_term(vec![0; arity], &c);
        p
    }

    /// The coordinate function `x_index`.
    pub fn var(index: usize, arity: usize) -> Self {
        assert!(index < arity, "variable index {index} out of range for arity {arity}");
        let mut exps = vec![0; arity];
        exps[index] = 1;
        XPoly::monomial(exps, GaussRat::one())
    }

    pub fn monomial(exps: Vec<u32>, c: GaussRat) -> Self {
        let mut p = XPoly::zero(exps.len());
        p.add_term(exps, &c);
        p
    }

    /// Univariate polynomial from coefficients in increasing degree.
    pub fn univariate<I: IntoIterator<Item = GaussRat>>(coeffs: I) -> Self {
        let mut p = XPoly::zero(1);
        for (d, c) in coeffs.into_iter().enumerate() {
            p.add_term(vec![d as u32], &c);
        }
        p
    }

    pub fn from_terms<I>(arity: usize, terms: I) -> Result<Self, AdmissibleError>
    where
        I: IntoIterator<Item = (Vec<u32>, GaussRat)>,
    {
        let mut p = XPoly::zero(arity);
        for (exps, c) in terms {
            if exps.len() != arity {
                return Err(AdmissibleError::ArityMismatch {
                    what: "x exponent vector",
                    expected: arity,
                    actual: exps.len(),
                });
            }
            p.add_term(exps, &c);
        }
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, GaussRat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, exps: Vec<u32>, c: &GaussRat) {
        debug_assert_eq!(exps.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(entry) => {
                *entry += c;
                if entry.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c.clone());
            }
        }
    }

    pub(crate) fn add_assign(&mut self, other: &XPoly) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c);
        }
    }

    fn check_arity(&self, other: &XPoly) -> Result<(), AdmissibleError> {
        if self.arity != other.arity {
            return Err(AdmissibleError::ArityMismatch { what: "x arity", expected: self.arity, actual: other.arity });
        }
        Ok(())
    }

    pub fn add(&self, other: &XPoly) -> Result<XPoly, AdmissibleError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    pub fn sub(&self, other: &XPoly) -> Result<XPoly, AdmissibleError> {
        self.add(&other.scale(&GaussRat::from_int(-1)))
    }

    pub fn mul(&self, other: &XPoly) -> Result<XPoly, AdmissibleError> {
        self.check_arity(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &XPoly) -> XPoly {
        let mut out = XPoly::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, &(ca * cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRat) -> XPoly {
        if c.is_zero() {
            return XPoly::zero(self.arity);
        }
        XPoly { arity: self.arity, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn pow(&self, exponent: u32) -> XPoly {
        (0..exponent).fold(XPoly::one(self.arity), |acc, _| acc.mul_unchecked(self))
    }

    /// `∫_{[0,1]^l} p(x) dx`.
    pub fn integrate_cube(&self) -> GaussRat {
        self.terms
            .iter()
            .map(|(exps, c)| {
                let volume: BigRat = exps.iter().map(|&e| BigRat::recip_of(e as u64 + 1)).product();
                c.scale(&volume)
            })
            .sum()
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.arity);
        self.terms
            .iter()
            .map(|(exps, c)| {
                let monomial: f64 = exps.iter().zip(x).map(|(&e, &xi)| xi.powi(e as i32)).product();
                c.to_complex() * monomial
            })
            .sum()
    }

    /// Highest exponent of each variable.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0; self.arity];
        for exps in self.terms.keys() {
            for (d, &e) in deg.iter_mut().zip(exps) {
                *d = (*d).max(e);
            }
        }
        deg
    }
}

impl fmt::Debug for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(exps, c)| {
                let vars: Vec<String> = exps
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                    .collect();
                if vars.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})·{}", vars.join("·"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
