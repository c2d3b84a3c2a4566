//! Plumbing behind the command line: input documents, seeded random
//! families, searches, certificates and reproducible reports.

mod checks;
mod family;
mod parse;
mod report;

pub use checks::{
    haar_check, moment_table, run_bridge_check, search_nonzero_moment, series_check, verify_mathieu_window,
    verify_vanishing, worm_enclosure_report, BridgeReport, BridgeRow, HaarReport, HaarRow, MathieuCertificate,
    MomentTable, SearchOutcome, SearchResult, SeriesRow, VanishingCertificate, WormEnclosureReport,
};
pub use family::{generate_family, FamilyKind, RandomFamilySpec};
pub use parse::{admissible_to_json, parse_input, parse_value, read_source, su2_to_json, ParseError};
pub use report::{input_digest, ExactValues, ExperimentReport, Timings, SCHEMA_VERSION};

use thiserror::Error;

use crate::admissible::{reduce_su2, Admissible, AdmissibleError};
use crate::quadrature::QuadratureError;
use crate::su2::SU2Function;
use crate::worm::{Trinomial, WormError};

/// A parsed input document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Su2(SU2Function),
    Admissible(Admissible),
}

impl Input {
    /// The admissible view; SU(2) inputs go through [`reduce_su2`].
    pub fn to_admissible(&self) -> Admissible {
        match self {
            Input::Su2(f) => reduce_su2(f),
            Input::Admissible(h) => h.clone(),
        }
    }

    pub fn as_su2(&self) -> Result<&SU2Function, HarnessError> {
        match self {
            Input::Su2(f) => Ok(f),
            Input::Admissible(_) => Err(HarnessError::Refusal("this command needs an SU(2) input".into())),
        }
    }

    pub fn to_trinomial(&self) -> Result<Trinomial, HarnessError> {
        match self {
            Input::Admissible(h) => Ok(Trinomial::from_admissible(h)?),
            Input::Su2(_) => Err(HarnessError::Refusal("this command needs an admissible trinomial".into())),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Input::Su2(f) => su2_to_json(f),
            Input::Admissible(h) => admissible_to_json(h),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("parse error {0}")]
    Parse(#[from] ParseError),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("refused: {0}")]
    Refusal(String),
    #[error("generation error: {0}")]
    Generation(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Worm(#[from] WormError),
    #[error(transparent)]
    Admissible(#[from] AdmissibleError),
}

impl HarnessError {
    /// 2 = refusal, 3 = parse error, 4 = inconclusive or under-resolved.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Parse(_) | HarnessError::Io { .. } | HarnessError::Admissible(_) => 3,
            HarnessError::Refusal(_) | HarnessError::Generation(_) => 2,
            HarnessError::Inconclusive(_) => 4,
            HarnessError::Quadrature(QuadratureError::UnderResolved { .. }) => 4,
            HarnessError::Quadrature(QuadratureError::InvalidSpec(_)) => 2,
            HarnessError::Worm(WormError::ContourAmbiguous { .. }) => 4,
            HarnessError::Worm(_) => 2,
            HarnessError::Inconsistent(_) => 1,
        }
    }
}
