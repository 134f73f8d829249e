//! Gromov–Hausdorff distance between finite metric spaces.
//!
//! `GH(X, Y) = ½ · min_R dis(R)` over correspondences `R`. The exact solver
//! searches correspondences by branch and bound; cheap lower bounds and a
//! seeded local search bracket the value when the search is too large.

mod approx;
mod bounds;
mod correspondence;
mod exact;
mod isometry;
mod local;

use serde::Serialize;
use thiserror::Error;

pub use approx::{check_eps_approx, ApproxCondition, EpsApproximation};
pub use bounds::gh_lower;
pub use correspondence::{distortion, Correspondence};
pub use exact::{gh_exact, DEFAULT_NODE_BUDGET};
pub use isometry::{
    find_isometry, fingerprints_match, isometry_oracle, ISOMETRY_POINT_CAP, ISOMETRY_TOLERANCE,
};
pub use local::{gh_upper_local, DEFAULT_RESTARTS};

pub(crate) use correspondence::pair_distortion;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GhError {
    #[error("invalid correspondence: {0}")]
    InvalidCorrespondence(String),
    #[error("node budget exhausted; best bracket [{}, {}]", .0.lower, .0.upper)]
    BudgetExhausted(Box<GhResult>),
    #[error("spaces have {left} and {right} points")]
    SizeMismatch { left: usize, right: usize },
    #[error("{points} points exceed the cap of {cap}")]
    TooLarge { points: usize, cap: usize },
}

/// A bracket `[lower, upper]` on `GH(X, Y)` with a correspondence whose
/// distortion is `2 · upper`. `exact` holds when the bracket is closed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhResult {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    pub witness: Correspondence,
}

impl GhResult {
    pub fn witness_pairs(&self) -> &[(usize, usize)] {
        self.witness.pairs()
    }
}
