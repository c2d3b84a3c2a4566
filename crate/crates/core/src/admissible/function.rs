use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use super::hull::{analyze, SpectrumHull};
use super::{AdmissibleError, XPoly};
use crate::numeric::GaussRat;

/// `h(z; x) = Σ_m c_m(x) z^m` on `𝕋^k × [0,1]^l`. Zero coefficient
/// polynomials are never stored, so the key set is exactly `Sp(h)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Admissible {
    z_arity: usize,
    x_arity: usize,
    terms: BTreeMap<Vec<i64>, XPoly>,
}

impl Admissible {
    pub fn zero(z_arity: usize, x_arity: usize) -> Self {
        Admissible { z_arity, x_arity, terms: BTreeMap::new() }
    }

    pub fn one(z_arity: usize, x_arity: usize) -> Self {
        Admissible::term(vec![0; z_arity], XPoly::one(x_arity))
    }

    /// The single term `c(x) z^exps`.
    pub fn term(exps: Vec<i64>, coeff: XPoly) -> Self {
        let mut h = Admissible::zero(exps.len(), coeff.arity());
        h.add_term(exps, &coeff);
        h
    }

    /// Single term with a constant coefficient.
    pub fn z_monomial(exps: Vec<i64>, c: GaussRat, x_arity: usize) -> Self {
        Admissible::term(exps, XPoly::constant(c, x_arity))
    }

    pub fn from_terms<I>(z_arity: usize, x_arity: usize, terms: I) -> Result<Self, AdmissibleError>
    where
        I: IntoIterator<Item = (Vec<i64>, XPoly)>,
    {
        let mut h = Admissible::zero(z_arity, x_arity);
        for (exps, coeff) in terms {
            if exps.len() != z_arity {
                return Err(AdmissibleError::ArityMismatch {
                    what: "z exponent vector",
                    expected: z_arity,
                    actual: exps.len(),
                });
            }
            if coeff.arity() != x_arity {
                return Err(AdmissibleError::ArityMismatch {
                    what: "x arity",
                    expected: x_arity,
                    actual: coeff.arity(),
                });
            }
            h.add_term(exps, &coeff);
        }
        Ok(h)
    }

    pub fn z_arity(&self) -> usize {
        self.z_arity
    }

    pub fn x_arity(&self) -> usize {
        self.x_arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, XPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[i64]) -> Option<&XPoly> {
        self.terms.get(exps)
    }

    fn add_term(&mut self, exps: Vec<i64>, coeff: &XPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(entry) => {
                entry.add_assign(coeff);
                if entry.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, coeff.clone());
            }
        }
    }

    fn check_arities(&self, other: &Admissible) -> Result<(), AdmissibleError> {
        if self.z_arity != other.z_arity {
            return Err(AdmissibleError::ArityMismatch {
                what: "z arity",
                expected: self.z_arity,
                actual: other.z_arity,
            });
        }
        if self.x_arity != other.x_arity {
            return Err(AdmissibleError::ArityMismatch {
                what: "x arity",
                expected: self.x_arity,
                actual: other.x_arity,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Admissible) -> Result<Admissible, AdmissibleError> {
        self.check_arities(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Admissible) -> Result<Admissible, AdmissibleError> {
        self.add(&other.scale(&GaussRat::from_int(-1)))
    }

    pub fn scale(&self, c: &GaussRat) -> Admissible {
        let mut out = Admissible::zero(self.z_arity, self.x_arity);
        for (e, p) in &self.terms {
            out.add_term(e.clone(), &p.scale(c));
        }
        out
    }

    /// Sparse convolution in `z`, polynomial product in `x`.
    pub fn mul(&self, other: &Admissible) -> Result<Admissible, AdmissibleError> {
        self.check_arities(other)?;
        Ok(self.mul_filtered(other, |_| true))
    }

    fn mul_filtered<F: Fn(&[i64]) -> bool>(&self, other: &Admissible, keep: F) -> Admissible {
        let mut out = Admissible::zero(self.z_arity, self.x_arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if keep(&exps) {
                    out.add_term(exps, &ca.mul_unchecked(cb));
                }
            }
        }
        out
    }

    /// `h^P` by iterated multiplication.
    pub fn ad_power(&self, exponent: u32) -> Admissible {
        let mut acc = Admissible::one(self.z_arity, self.x_arity);
        for _ in 0..exponent {
            acc = acc.mul_filtered(self, |_| true);
        }
        acc
    }

    /// `h^P` by repeated squaring.
    pub fn ad_power_by_squaring(&self, exponent: u32) -> Admissible {
        let mut acc = Admissible::one(self.z_arity, self.x_arity);
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_filtered(&base, |_| true);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_filtered(&base, |_| true);
            }
        }
        acc
    }

    /// `∫_{[0,1]^l} ∫_{𝕋^k} h`: the cube integral of the `z⁰` coefficient.
    pub fn moment(&self) -> GaussRat {
        self.terms.get(&vec![0; self.z_arity]).map(XPoly::integrate_cube).unwrap_or_else(GaussRat::zero)
    }

    /// `∫∫ h^P`, exactly.
    pub fn power_moment(&self, exponent: u32) -> GaussRat {
        self.power_moments(exponent)[exponent as usize].clone()
    }

    /// `[∫∫ h^0, ∫∫ h^1, …, ∫∫ h^pmax]`, building each power from the
    /// previous one. Monomials that can no longer return to `z⁰` within the
    /// remaining multiplications are dropped along the way.
    pub fn power_moments(&self, pmax: u32) -> Vec<GaussRat> {
        let origin = vec![0; self.z_arity];
        let mut sweep = PowerSweep::new(self, vec![origin], pmax);
        let mut out = Vec::with_capacity(pmax as usize + 1);
        out.push(sweep.current().moment());
        while sweep.step() {
            out.push(sweep.current().moment());
        }
        out
    }

    /// `(P, ∫∫ h^P)` for `P = 0, 1, …, pmax`, computed lazily so a caller
    /// can stop at the first interesting value.
    pub fn power_moment_iter(&self, pmax: u32) -> PowerMoments<'_> {
        let origin = vec![0; self.z_arity];
        PowerMoments { sweep: PowerSweep::new(self, vec![origin], pmax), started: false }
    }

    /// `∫∫ h^P g` for every `P` in `pmin..=pmax`.
    pub fn weighted_power_moments(
        &self,
        g: &Admissible,
        pmin: u32,
        pmax: u32,
    ) -> Result<Vec<(u32, GaussRat)>, AdmissibleError> {
        self.check_arities(g)?;
        let targets: Vec<Vec<i64>> = g.terms.keys().map(|m| m.iter().map(|v| -v).collect()).collect();
        if targets.is_empty() {
            return Ok((pmin..=pmax).map(|p| (p, GaussRat::zero())).collect());
        }
        let mut sweep = PowerSweep::new(self, targets, pmax);
        let mut out = Vec::new();
        loop {
            let p = sweep.power();
            if p >= pmin {
                out.push((p, zero_coefficient_of_product(sweep.current(), g)));
            }
            if !sweep.step() {
                break;
            }
        }
        Ok(out)
    }

    pub fn spectrum(&self) -> SpectrumHull {
        let points: Vec<Vec<i64>> = self.terms.keys().cloned().collect();
        if points.is_empty() {
            return SpectrumHull { points, contains_zero: false, margin: None, separators: Vec::new() };
        }
        analyze(&points).expect("spectrum points share the z arity")
    }

    pub fn eval(&self, z: &[Complex64], x: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(exps, c)| {
                let zm: Complex64 = exps.iter().zip(z).map(|(&e, zi)| zi.powi(e as i32)).product();
                c.eval(x) * zm
            })
            .sum()
    }

    /// Largest `|m_i|` per z variable.
    pub fn z_extent(&self) -> Vec<u64> {
        let mut ext = vec![0; self.z_arity];
        for exps in self.terms.keys() {
            for (d, &e) in ext.iter_mut().zip(exps) {
                *d = (*d).max(e.unsigned_abs());
            }
        }
        ext
    }

    /// Largest exponent per x variable.
    pub fn x_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0; self.x_arity];
        for p in self.terms.values() {
            for (d, e) in deg.iter_mut().zip(p.degrees()) {
                *d = (*d).max(e);
            }
        }
        deg
    }
}

fn zero_coefficient_of_product(power: &Admissible, g: &Admissible) -> GaussRat {
    let mut acc = XPoly::zero(power.x_arity);
    for (m, gc) in &g.terms {
        let neg: Vec<i64> = m.iter().map(|v| -v).collect();
        if let Some(pc) = power.terms.get(&neg) {
            acc.add_assign(&pc.mul_unchecked(gc));
        }
    }
    acc.integrate_cube()
}

pub struct PowerMoments<'a> {
    sweep: PowerSweep<'a>,
    started: bool,
}

impl Iterator for PowerMoments<'_> {
    type Item = (u32, GaussRat);

    fn next(&mut self) -> Option<Self::Item> {
        if self.started && !self.sweep.step() {
            return None;
        }
        self.started = true;
        Some((self.sweep.power(), self.sweep.current().moment()))
    }
}

/// Incremental powers `h^0, h^1, …, h^horizon` that only keep monomials still
/// able to land on one of `targets` after some number of further factors.
///
/// Reachability is tested along a fixed family of integer directions `u`:
/// after `r` more factors `⟨u, m⟩` moves by an amount in
/// `[r·min⟨u,Sp⟩, r·max⟨u,Sp⟩]`.
struct PowerSweep<'a> {
    base: &'a Admissible,
    targets: Vec<Vec<i64>>,
    horizon: u32,
    power: u32,
    current: Admissible,
    directions: Vec<(Vec<i64>, i64, i64)>,
}

impl<'a> PowerSweep<'a> {
    fn new(base: &'a Admissible, targets: Vec<Vec<i64>>, horizon: u32) -> Self {
        let directions = probe_directions(base.z_arity)
            .into_iter()
            .filter_map(|u| {
                let values: Vec<i64> = base.terms.keys().map(|m| dot(&u, m)).collect();
                let lo = *values.iter().min()?;
                let hi = *values.iter().max()?;
                Some((u, lo, hi))
            })
            .collect();
        let mut sweep = PowerSweep {
            base,
            targets,
            horizon,
            power: 0,
            current: Admissible::one(base.z_arity, base.x_arity),
            directions,
        };
        let remaining = horizon;
        sweep.current.terms.retain(|m, _| Self::reachable(&sweep.directions, &sweep.targets, m, remaining));
        sweep
    }

    fn power(&self) -> u32 {
        self.power
    }

    fn current(&self) -> &Admissible {
        &self.current
    }

    fn step(&mut self) -> bool {
        if self.power >= self.horizon {
            return false;
        }
        self.power += 1;
        let remaining = self.horizon - self.power;
        let directions = &self.directions;
        let targets = &self.targets;
        self.current = self.current.mul_filtered(self.base, |m| Self::reachable(directions, targets, m, remaining));
        true
    }

    fn reachable(directions: &[(Vec<i64>, i64, i64)], targets: &[Vec<i64>], m: &[i64], remaining: u32) -> bool {
        targets.iter().any(|t| {
            directions.iter().all(|(u, lo, hi)| {
                let gap = dot(u, t) - dot(u, m);
                (0..=remaining as i64).any(|r| r * lo <= gap && gap <= r * hi)
            })
        })
    }
}

fn dot(u: &[i64], v: &[i64]) -> i64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Nonzero vectors of `{−1,0,1}^k` up to sign for small `k`, else the axes.
fn probe_directions(k: usize) -> Vec<Vec<i64>> {
    if k == 0 {
        return Vec::new();
    }
    if k > 4 {
        return (0..k)
            .map(|i| {
                let mut u = vec![0; k];
                u[i] = 1;
                u
            })
            .collect();
    }
    let mut out = Vec::new();
    let count = 3usize.pow(k as u32);
    for code in 0..count {
        let mut c = code;
        let u: Vec<i64> = (0..k)
            .map(|_| {
                let d = (c % 3) as i64 - 1;
                c /= 3;
                d
            })
            .collect();
        // keep one representative of ±u: first nonzero entry positive
        if let Some(first) = u.iter().find(|&&v| v != 0) {
            if *first > 0 {
                out.push(u);
            }
        }
    }
    out
}

impl fmt::Debug for Admissible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Admissible(k={}, l={}; {self})", self.z_arity, self.x_arity)
    }
}

impl fmt::Display for Admissible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(exps, c)| format!("[{c}]·z^{exps:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Helper for building `x·z + (1 − x)·z⁻¹` style examples.
pub fn one_minus(p: &XPoly) -> XPoly {
    XPoly::one(p.arity()).sub(p).expect("same arity")
}
