use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::One;

use super::{BigRat, NumericError};

/// Default number of factorials kept in the shared table.
pub const DEFAULT_FACTORIAL_CAP: usize = 10_000;

/// An ordered split of `total` into non-negative parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<u64>,
    total: u64,
}

impl Composition {
    pub fn new(parts: Vec<u64>) -> Self {
        let total = parts.iter().sum();
        Composition { parts, total }
    }

    /// Builds a composition that must sum to `total`.
    pub fn with_total(parts: Vec<u64>, total: u64) -> Result<Self, NumericError> {
        let c = Composition::new(parts);
        if c.total != total {
            return Err(NumericError::CompositionMismatch { expected: total, actual: c.total });
        }
        Ok(c)
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

/// Memoized factorials `0!..=cap!`; requests beyond the cap are computed on
/// the fly and not stored.
#[derive(Debug)]
pub struct FactorialTable {
    cap: usize,
    values: RwLock<Vec<BigUint>>,
}

impl FactorialTable {
    pub fn new(cap: usize) -> Self {
        FactorialTable { cap, values: RwLock::new(vec![BigUint::one()]) }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn get(&self, n: u64) -> BigUint {
        let idx = n as usize;
        {
            let values = self.values.read().expect("factorial table poisoned");
            if let Some(v) = values.get(idx) {
                return v.clone();
            }
        }
        if idx > self.cap {
            let base = self.get(self.cap as u64);
            return (self.cap as u64 + 1..=n).fold(base, |acc, k| acc * k);
        }
        let mut values = self.values.write().expect("factorial table poisoned");
        while values.len() <= idx {
            let k = values.len() as u64;
            let next = values.last().expect("table starts with 0!") * k;
            values.push(next);
        }
        values[idx].clone()
    }
}

/// Process-wide factorial table with [`DEFAULT_FACTORIAL_CAP`].
pub fn factorials() -> &'static FactorialTable {
    static TABLE: OnceLock<FactorialTable> = OnceLock::new();
    TABLE.get_or_init(|| FactorialTable::new(DEFAULT_FACTORIAL_CAP))
}

pub fn factorial(n: u64) -> BigUint {
    factorials().get(n)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let f = factorials();
    f.get(n) / (f.get(k) * f.get(n - k))
}

/// `total! / ∏ parts_i!`.
pub fn multinomial_coeff(total: u64, parts: &Composition) -> Result<BigUint, NumericError> {
    if parts.total() != total {
        return Err(NumericError::CompositionMismatch { expected: total, actual: parts.total() });
    }
    let f = factorials();
    let denom = parts.parts().iter().fold(BigUint::one(), |acc, &p| acc * f.get(p));
    Ok(f.get(total) / denom)
}

/// `∫₀¹ xᵐ (1−x)ⁿ dx = m! n! / (m+n+1)!`.
pub fn beta_moment(m: u64, n: u64) -> BigRat {
    let f = factorials();
    let numer = f.get(m) * f.get(n);
    let denom = f.get(m + n + 1);
    BigRat::new(numer.into(), denom.into()).expect("factorials are positive")
}
