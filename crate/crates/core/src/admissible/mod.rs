//! Admissible functions: Laurent polynomials in torus variables `z` whose
//! coefficients are polynomials in cube variables `x`.

mod bound;
mod function;
mod hull;
mod reduce;
mod xpoly;

pub use bound::mathieu_bound;
pub use function::{one_minus, Admissible, PowerMoments};
pub use hull::{analyze as analyze_hull, planar_hull, zero_in_hull, Separator, SpectrumHull};
pub use reduce::reduce_su2;
pub use xpoly::XPoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdmissibleError {
    #[error("{what} mismatch: expected {expected}, found {actual}")]
    ArityMismatch { what: &'static str, expected: usize, actual: usize },
    #[error("convex hull of an empty point set")]
    EmptyPointSet,
}
