use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{HarnessError, Input};
use crate::admissible::{Admissible, XPoly};
use crate::numeric::{BigRat, GaussRat};
use crate::su2::{SU2Function, SU2Monomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Su2,
    Admissible,
}

/// Seeded recipe for a random instance.
///
/// Exponents lie in `[−E, E]` for `k` and `z`, in `[0, E]` for `n`, `m` and
/// `x`. Rational coefficient parts are `p/q` with `|p| ≤ H` and `1 ≤ q ≤ H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RandomFamilySpec {
    pub kind: FamilyKind,
    pub min_terms: usize,
    pub max_terms: usize,
    pub exponent_bound: u32,
    pub height_bound: u32,
    pub z_arity: usize,
    pub x_arity: usize,
    pub seed: u64,
}

impl RandomFamilySpec {
    pub fn su2(max_terms: usize, exponent_bound: u32, height_bound: u32, seed: u64) -> Self {
        RandomFamilySpec {
            kind: FamilyKind::Su2,
            min_terms: 1,
            max_terms,
            exponent_bound,
            height_bound,
            z_arity: 2,
            x_arity: 1,
            seed,
        }
    }

    pub fn admissible(
        z_arity: usize,
        x_arity: usize,
        max_terms: usize,
        exponent_bound: u32,
        height_bound: u32,
        seed: u64,
    ) -> Self {
        RandomFamilySpec {
            kind: FamilyKind::Admissible,
            min_terms: 1,
            max_terms,
            exponent_bound,
            height_bound,
            z_arity,
            x_arity,
            seed,
        }
    }

    /// Number of distinct monomials available for the term list.
    fn monomial_space(&self) -> u128 {
        let e = self.exponent_bound as u128;
        match self.kind {
            FamilyKind::Su2 => (2 * e + 1) * (e + 1) * (e + 1),
            FamilyKind::Admissible => (0..self.z_arity).fold(1u128, |acc, _| acc.saturating_mul(2 * e + 1)),
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: &str| Err(HarnessError::Generation(msg.to_string()));
        if self.min_terms == 0 || self.max_terms < self.min_terms {
            return bad("term count range must satisfy 1 ≤ min ≤ max");
        }
        if self.height_bound == 0 {
            return bad("coefficient height bound must be positive");
        }
        if self.kind == FamilyKind::Admissible && self.z_arity == 0 {
            return bad("z arity must be positive");
        }
        if (self.min_terms as u128) > self.monomial_space() {
            return Err(HarnessError::Generation(format!(
                "{} distinct terms requested but only {} monomials fit the exponent bound",
                self.min_terms,
                self.monomial_space()
            )));
        }
        Ok(())
    }
}

fn random_rational(rng: &mut ChaCha8Rng, height: u32) -> BigRat {
    let h = height as i64;
    BigRat::from_ratio(rng.random_range(-h..=h), rng.random_range(1..=h))
}

fn random_coeff(rng: &mut ChaCha8Rng, height: u32) -> GaussRat {
    loop {
        let c = GaussRat::new(random_rational(rng, height), random_rational(rng, height));
        if c != GaussRat::default() {
            return c;
        }
    }
}

fn random_xpoly(rng: &mut ChaCha8Rng, spec: &RandomFamilySpec) -> XPoly {
    let e = spec.exponent_bound;
    loop {
        let mut p = XPoly::zero(spec.x_arity);
        let count = if spec.x_arity == 0 { 1 } else { rng.random_range(1..=2) };
        for _ in 0..count {
            let exps: Vec<u32> = (0..spec.x_arity).map(|_| rng.random_range(0..=e)).collect();
            let c = random_coeff(rng, spec.height_bound);
            // summing onto an existing term could exceed the height bound
            if !p.terms().contains_key(&exps) {
                p.add_term(exps, &c);
            }
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// Deterministic instance for `spec`; the same spec always yields the same
/// value.
pub fn generate_family(spec: &RandomFamilySpec) -> Result<Input, HarnessError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let space = spec.monomial_space();
    let upper = (spec.max_terms as u128).min(space) as usize;
    let count = rng.random_range(spec.min_terms..=upper);
    let e = spec.exponent_bound as i64;
    match spec.kind {
        FamilyKind::Su2 => {
            let mut seen = BTreeSet::new();
            let mut terms = Vec::with_capacity(count);
            while terms.len() < count {
                let mono = SU2Monomial::new(
                    rng.random_range(-e..=e),
                    rng.random_range(0..=e) as u32,
                    rng.random_range(0..=e) as u32,
                );
                if seen.insert(mono) {
                    terms.push((mono, random_coeff(&mut rng, spec.height_bound)));
                }
            }
            Ok(Input::Su2(SU2Function::from_terms(terms)))
        }
        FamilyKind::Admissible => {
            let mut seen = BTreeSet::new();
            let mut terms = Vec::with_capacity(count);
            while terms.len() < count {
                let z: Vec<i64> = (0..spec.z_arity).map(|_| rng.random_range(-e..=e)).collect();
                if seen.insert(z.clone()) {
                    terms.push((z, random_xpoly(&mut rng, spec)));
                }
            }
            let h = Admissible::from_terms(spec.z_arity, spec.x_arity, terms).expect("arities match the spec");
            Ok(Input::Admissible(h))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let spec = RandomFamilySpec::su2(3, 3, 5, 1);
        let a = generate_family(&spec).unwrap();
        assert_eq!(a, generate_family(&spec).unwrap());
        let Input::Su2(f) = a else { panic!() };
        assert!((1..=3).contains(&f.len()));
        assert_ne!(generate_family(&RandomFamilySpec::su2(3, 3, 5, 2)).unwrap(), generate_family(&spec).unwrap());
    }

    #[test]
    fn bounds_are_respected() {
        for seed in 0..50 {
            let spec = RandomFamilySpec::admissible(3, 2, 8, 2, 5, seed);
            let Input::Admissible(h) = generate_family(&spec).unwrap() else { panic!() };
            assert!((1..=8).contains(&h.len()));
            for (z, c) in h.terms() {
                assert!(z.iter().all(|v| v.abs() <= 2));
                for (x, coeff) in c.terms() {
                    assert!(x.iter().all(|&v| v <= 2));
                    for part in [&coeff.re, &coeff.im] {
                        assert!(part.numer().magnitude() <= &5u32.into() && part.denom() <= &5.into());
                    }
                }
            }
        }
    }

    #[test]
    fn zero_exponent_bound() {
        let spec = RandomFamilySpec::admissible(1, 1, 1, 0, 3, 9);
        let Input::Admissible(h) = generate_family(&spec).unwrap() else { panic!() };
        assert!(h.terms().keys().all(|z| z == &vec![0]));

        let too_many = RandomFamilySpec { min_terms: 3, max_terms: 3, ..spec };
        assert!(matches!(generate_family(&too_many), Err(HarnessError::Generation(_))));
        let no_height = RandomFamilySpec { height_bound: 0, ..RandomFamilySpec::su2(2, 1, 1, 0) };
        assert!(generate_family(&no_height).is_err());
    }
}
