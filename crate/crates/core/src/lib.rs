//! Exact moment computations for regular functions on SU(2) and for
//! admissible Laurent polynomials on `𝕋^k × [0,1]^l`.
//!
//! The crate provides:
//!
//! * [`numeric`]: reduced rationals, Gaussian rationals, multinomials and
//!   beta integrals.
//! * [`su2`]: normal-form arithmetic in `ℂ[SU(2)]`, the Haar functional, power
//!   moments computed two independent ways, and torus weights.
//! * [`admissible`]: admissible functions, their moments, exact spectrum-hull
//!   geometry, vanishing bounds, and the reduction map from SU(2).
//! * [`quadrature`]: floating-point integration oracles for both settings.
//! * [`worm`]: critical-value curves of trinomial families, origin
//!   enclosure, and generating-function evaluation by residues.
//! * [`harness`]: parsing, random families, searches and certificates used by
//!   the command line front end.

pub mod admissible;
pub mod corpus;
pub mod harness;
pub mod numeric;
#[cfg(any(test, feature = "oracles"))]
pub mod oracle;
pub mod quadrature;
pub mod su2;
pub mod worm;

pub use admissible::{Admissible, AdmissibleError, SpectrumHull, XPoly};
pub use numeric::{BigRat, GaussRat, NumericError};
pub use su2::{SU2Function, SU2Monomial, WeightPair};
