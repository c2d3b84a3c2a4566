//! Exact scalars: reduced rationals, Gaussian rationals and the
//! combinatorial quantities (factorials, multinomials, beta integrals) that
//! the moment computations are assembled from.
//!
//! All values are canonical from construction onward, so equality is
//! structural everywhere downstream.

mod combinatorics;
mod gauss;
mod rational;

pub use combinatorics::{
    beta_moment, binomial, factorial, factorials, multinomial_coeff, Composition, FactorialTable, DEFAULT_FACTORIAL_CAP,
};
pub use gauss::{gauss_canonicalize, GaussRat, RawGaussRat};
pub use rational::BigRat;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("rational `{0}` is not in lowest terms with positive denominator")]
    NonCanonical(String),
    #[error("composition sums to {actual}, expected {expected}")]
    CompositionMismatch { expected: u64, actual: u64 },
}
