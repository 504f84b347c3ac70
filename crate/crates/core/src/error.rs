use thiserror::Error;

use crate::kobayashi::Interval;

pub type Result<T> = std::result::Result<T, HoroError>;

/// Every failure mode the laboratory reports.
///
/// Input problems, numeric contract violations and estimate failures are kept
/// apart so the CLI can map them onto distinct exit codes.
#[derive(Debug, Error)]
pub enum HoroError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {0} lies outside the domain")]
    Exterior(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("chain refinement could not reach tolerance {tol}: best interval [{}, {}]", best.lo, best.hi)]
    ChainRefinement { tol: f64, best: Interval },

    #[error("quasi-geodesic construction failed: {0}")]
    Construction(String),

    #[error("horofunction estimate unresolved (oscillation {osc:e})")]
    Unresolved {
        osc: f64,
        estimate: Box<crate::horofunction::HorofunctionEstimate>,
    },

    #[error("deep point search failed: {0}")]
    SearchFailure(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("horizon exhausted: {0}")]
    Horizon(String),

    #[error("map certification failed: {0}")]
    Certification(String),

    #[error("grid resolution too coarse: {0}")]
    Resolution(String),
}

impl HoroError {
    /// True for errors caused by the caller's input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            HoroError::DimensionMismatch { .. }
                | HoroError::Exterior(_)
                | HoroError::InvalidInput(_)
                | HoroError::InvalidDomain(_)
                | HoroError::Unsupported(_)
        )
    }
}
