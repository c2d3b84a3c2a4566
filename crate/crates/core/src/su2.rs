//! Regular functions on SU(2) in normal form.
//!
//! A group element is `[[a, -b*], [b, a*]]` with `a a* + b b* = 1`. Every
//! regular function is a finite combination of monomials `a^k b^n b*^m` with
//! `k ∈ ℤ` (negative `k` meaning `(a*)^{-k}`) and `n, m ≥ 0`. Mixed products
//! of `a` and `a*` never survive: they are rewritten through
//! `a a* = 1 − b b*` as soon as they appear, so two functions are equal
//! exactly when their term maps are.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::numeric::{beta_moment, binomial, multinomial_coeff, BigRat, Composition, GaussRat};

/// `a^a_exp · b^b_exp · (b*)^b_star_exp`, with negative `a_exp` standing for
/// a power of `a*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SU2Monomial {
    #[serde(rename = "k")]
    pub a_exp: i64,
    #[serde(rename = "n")]
    pub b_exp: u32,
    #[serde(rename = "m")]
    pub b_star_exp: u32,
}

impl SU2Monomial {
    pub const ONE: SU2Monomial = SU2Monomial { a_exp: 0, b_exp: 0, b_star_exp: 0 };

    pub fn new(a_exp: i64, b_exp: u32, b_star_exp: u32) -> Self {
        SU2Monomial { a_exp, b_exp, b_star_exp }
    }

    /// Torus weight `(n − m, k)`.
    pub fn weight(&self) -> WeightPair {
        WeightPair { z_weight: self.b_exp as i64 - self.b_star_exp as i64, a_weight: self.a_exp }
    }

    pub fn conjugate(&self) -> Self {
        SU2Monomial { a_exp: -self.a_exp, b_exp: self.b_star_exp, b_star_exp: self.b_exp }
    }

    /// Haar integral of the monomial: `δ_{k,0} δ_{n,m} / (n+1)`.
    pub fn haar(&self) -> BigRat {
        if self.a_exp == 0 && self.b_exp == self.b_star_exp {
            BigRat::recip_of(self.b_exp as u64 + 1)
        } else {
            BigRat::zero()
        }
    }

    pub fn eval(&self, a: Complex64, b: Complex64) -> Complex64 {
        let a_part = if self.a_exp >= 0 { a.powi(self.a_exp as i32) } else { a.conj().powi((-self.a_exp) as i32) };
        a_part * b.powi(self.b_exp as i32) * b.conj().powi(self.b_star_exp as i32)
    }

    /// Product of two monomials, reduced to normal form.
    fn product(&self, other: &SU2Monomial) -> Vec<(SU2Monomial, BigInt)> {
        let n = self.b_exp + other.b_exp;
        let m = self.b_star_exp + other.b_star_exp;
        let (p, q) = (self.a_exp, other.a_exp);
        if p.signum() * q.signum() >= 0 {
            return vec![(SU2Monomial::new(p + q, n, m), BigInt::one())];
        }
        // a^u (a*)^v = a^{u−v} (1 − b b*)^{min(u,v)}
        let overlap = p.abs().min(q.abs()) as u64;
        (0..=overlap)
            .map(|j| {
                let c = BigInt::from(binomial(overlap, j));
                let c = if j % 2 == 1 { -c } else { c };
                (SU2Monomial::new(p + q, n + j as u32, m + j as u32), c)
            })
            .collect()
    }
}

impl fmt::Display for SU2Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        match self.a_exp {
            0 => {}
            1 => factors.push("a".to_string()),
            -1 => factors.push("a*".to_string()),
            k if k > 0 => factors.push(format!("a^{k}")),
            k => factors.push(format!("a*^{}", -k)),
        }
        match self.b_exp {
            0 => {}
            1 => factors.push("b".to_string()),
            n => factors.push(format!("b^{n}")),
        }
        match self.b_star_exp {
            0 => {}
            1 => factors.push("b*".to_string()),
            m => factors.push(format!("b*^{m}")),
        }
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join(" "))
        }
    }
}

/// Weights of a monomial under the two maximal-torus actions, arranged as
/// `(n − m, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeightPair {
    pub z_weight: i64,
    pub a_weight: i64,
}

impl WeightPair {
    pub fn to_vec(self) -> Vec<i64> {
        vec![self.z_weight, self.a_weight]
    }
}

/// A term `c · a^k b^n b*^m` with `k ≥ 0` (`plus` list) or `c' · (a*)^{k'} b^n b*^m`
/// with `k' > 0` (`minus` list).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitTerm {
    pub a_power: u64,
    pub b_exp: u64,
    pub b_star_exp: u64,
    pub coeff: GaussRat,
}

/// Element of `ℂ[SU(2)]`; never stores a zero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SU2Function {
    terms: BTreeMap<SU2Monomial, GaussRat>,
}

impl SU2Function {
    pub fn zero() -> Self {
        SU2Function::default()
    }

    pub fn one() -> Self {
        SU2Function::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        SU2Function::monomial(SU2Monomial::ONE, c)
    }

    pub fn monomial(mono: SU2Monomial, c: GaussRat) -> Self {
        let mut f = SU2Function::zero();
        f.add_term(mono, &c);
        f
    }

    pub fn a() -> Self {
        SU2Function::monomial(SU2Monomial::new(1, 0, 0), GaussRat::one())
    }

    pub fn a_star() -> Self {
        SU2Function::monomial(SU2Monomial::new(-1, 0, 0), GaussRat::one())
    }

    pub fn b() -> Self {
        SU2Function::monomial(SU2Monomial::new(0, 1, 0), GaussRat::one())
    }

    pub fn b_star() -> Self {
        SU2Function::monomial(SU2Monomial::new(0, 0, 1), GaussRat::one())
    }

    /// Sums the given terms; repeated monomials are combined and zeros dropped.
    pub fn from_terms<I: IntoIterator<Item = (SU2Monomial, GaussRat)>>(terms: I) -> Self {
        let mut f = SU2Function::zero();
        for (mono, c) in terms {
            f.add_term(mono, &c);
        }
        f
    }

    pub fn terms(&self) -> &BTreeMap<SU2Monomial, GaussRat> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &SU2Monomial) -> GaussRat {
        self.terms.get(mono).cloned().unwrap_or_else(GaussRat::zero)
    }

    fn add_term(&mut self, mono: SU2Monomial, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono).or_insert_with(GaussRat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return SU2Function::zero();
        }
        SU2Function { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    /// Product in normal form.
    pub fn normal_multiply(&self, other: &SU2Function) -> SU2Function {
        let mut out = SU2Function::zero();
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                let c = cx * cy;
                for (mono, k) in x.product(y) {
                    out.add_term(mono, &c.scale(&BigRat::from(k)));
                }
            }
        }
        out
    }

    /// `f^exponent` by iterated multiplication.
    pub fn power(&self, exponent: u32) -> SU2Function {
        let mut acc = SU2Function::one();
        for _ in 0..exponent {
            acc = acc.normal_multiply(self);
        }
        acc
    }

    /// `f^exponent` by repeated squaring.
    pub fn power_by_squaring(&self, exponent: u32) -> SU2Function {
        let mut acc = SU2Function::one();
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.normal_multiply(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.normal_multiply(&base);
            }
        }
        acc
    }

    /// Pointwise complex conjugate: `a^k b^n b*^m ↦ a^{−k} b^m b*^n`.
    pub fn conjugate(&self) -> SU2Function {
        SU2Function { terms: self.terms.iter().map(|(k, v)| (k.conjugate(), v.conj())).collect() }
    }

    /// Normalized Haar integral, extended linearly from the monomial formula.
    pub fn haar_functional(&self) -> GaussRat {
        self.terms
            .iter()
            .map(|(mono, c)| {
                let h = mono.haar();
                if h.is_zero() {
                    GaussRat::zero()
                } else {
                    c.scale(&h)
                }
            })
            .sum()
    }

    /// `∫ f^P` through the normal-form power.
    pub fn power_moment_direct(&self, exponent: u32) -> GaussRat {
        self.power(exponent).haar_functional()
    }

    /// Splits the term map into the `a`-side (`k ≥ 0`) and `a*`-side (`k < 0`)
    /// term lists.
    pub fn split_terms(&self) -> (Vec<SplitTerm>, Vec<SplitTerm>) {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (mono, c) in &self.terms {
            let t = SplitTerm {
                a_power: mono.a_exp.unsigned_abs(),
                b_exp: mono.b_exp as u64,
                b_star_exp: mono.b_star_exp as u64,
                coeff: c.clone(),
            };
            if mono.a_exp >= 0 {
                plus.push(t);
            } else {
                minus.push(t);
            }
        }
        (plus, minus)
    }

    /// `∫ f^P` as the constrained multinomial sum over the split term lists:
    /// exponents `s_j` (a-side) and `t_j` (a*-side) with `Σ(s+t) = P`,
    /// `Σ k_j s_j = Σ k'_j t_j` and balanced `b`, `b*` degrees, each term
    /// weighted by a beta integral.
    pub fn power_moment_combinatorial(&self, exponent: u32) -> GaussRat {
        let (plus, minus) = self.split_terms();
        let n_plus = plus.len();
        let all: Vec<&SplitTerm> = plus.iter().chain(minus.iter()).collect();
        let total = exponent as u64;
        if all.is_empty() {
            return if total == 0 { GaussRat::one() } else { GaussRat::zero() };
        }

        let powers: Vec<Vec<GaussRat>> = all
            .iter()
            .map(|t| {
                let mut p = Vec::with_capacity(exponent as usize + 1);
                p.push(GaussRat::one());
                for i in 0..exponent as usize {
                    let next = &p[i] * &t.coeff;
                    p.push(next);
                }
                p
            })
            .collect();

        let mut sum = GaussRat::zero();
        let mut parts = vec![0u64; all.len()];
        for_each_composition(total, &mut parts, 0, &mut |parts| {
            let mut a_side = 0u64;
            let mut a_star_side = 0u64;
            let mut b_deg = 0u64;
            let mut b_star_deg = 0u64;
            for (j, (&e, t)) in parts.iter().zip(&all).enumerate() {
                if j < n_plus {
                    a_side += t.a_power * e;
                } else {
                    a_star_side += t.a_power * e;
                }
                b_deg += t.b_exp * e;
                b_star_deg += t.b_star_exp * e;
            }
            if a_side != a_star_side || b_deg != b_star_deg {
                return;
            }
            let multinomial = multinomial_coeff(total, &Composition::new(parts.to_vec()))
                .expect("enumerated composition sums to total");
            let weight = BigRat::from(multinomial) * beta_moment(b_deg, a_side);
            let coeff = parts.iter().enumerate().fold(GaussRat::one(), |acc, (j, &e)| &acc * &powers[j][e as usize]);
            sum += &coeff.scale(&weight);
        });
        sum
    }

    /// Torus weights `(n − m, k)` of the monomials present.
    pub fn weight_spectrum(&self) -> BTreeSet<WeightPair> {
        self.terms.keys().map(SU2Monomial::weight).collect()
    }

    pub fn eval(&self, a: Complex64, b: Complex64) -> Complex64 {
        self.terms.iter().map(|(mono, c)| c.to_complex() * mono.eval(a, b)).sum()
    }

    /// Largest `|k|`, `n` and `m` over all terms.
    pub fn max_exponents(&self) -> (u64, u64, u64) {
        self.terms.keys().fold((0, 0, 0), |(k, n, m), mono| {
            (k.max(mono.a_exp.unsigned_abs()), n.max(mono.b_exp as u64), m.max(mono.b_star_exp as u64))
        })
    }
}

/// Calls `visit` with every composition of `remaining` into `parts[idx..]`.
pub(crate) fn for_each_composition<F: FnMut(&[u64])>(remaining: u64, parts: &mut [u64], idx: usize, visit: &mut F) {
    if idx + 1 == parts.len() {
        parts[idx] = remaining;
        visit(parts);
        return;
    }
    for e in 0..=remaining {
        parts[idx] = e;
        for_each_composition(remaining - e, parts, idx + 1, visit);
    }
    parts[idx] = 0;
}

impl fmt::Display for SU2Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(mono, c)| format!("({c})·{mono}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add<&SU2Function> for &SU2Function {
    type Output = SU2Function;
    fn add(self, rhs: &SU2Function) -> SU2Function {
        let mut out = self.clone();
        for (mono, c) in &rhs.terms {
            out.add_term(*mono, c);
        }
        out
    }
}

impl Sub<&SU2Function> for &SU2Function {
    type Output = SU2Function;
    fn sub(self, rhs: &SU2Function) -> SU2Function {
        self + &(-rhs)
    }
}

impl Neg for &SU2Function {
    type Output = SU2Function;
    fn neg(self) -> SU2Function {
        SU2Function { terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect() }
    }
}

impl Mul<&SU2Function> for &SU2Function {
    type Output = SU2Function;
    fn mul(self, rhs: &SU2Function) -> SU2Function {
        self.normal_multiply(rhs)
    }
}
