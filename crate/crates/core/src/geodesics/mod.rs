//! Geodesics in the Gromov–Hausdorff space built from an optimal
//! correspondence: the straight geodesic, its product expansion, and the
//! tailed family `F(s, q)` parameterized by points of the Hilbert cube.
//!
//! Every sampled space remembers where its points come from (a [`PointKey`]),
//! so the correspondence used in the geodesic estimate between any two
//! samples can be rebuilt and its distortion evaluated directly.

mod bunch;
mod product;
mod straight;
mod verify;

use serde::Serialize;
use thiserror::Error;

use crate::constructors::ConstructionError;
use crate::gh::{Correspondence, GhError};
use crate::lipschitz::ZeroSetError;
use crate::space::{FiniteMetricSpace, MetricError};

pub use bunch::{bunch_distinctness, BranchSpec, BunchCurve, Certificate, DistinctnessReport, PairVerdict};
pub use product::ProductExpanded;
pub use straight::StraightGeodesic;
pub use verify::{verify_geodesic, GeodesicReport, GridPair};

/// Default tolerance of the geodesic checks.
pub const GEODESIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeodesicError {
    #[error(transparent)]
    Gh(#[from] GhError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    ZeroSet(#[from] ZeroSetError),
    #[error("endpoints are at GH distance zero")]
    ZeroLength,
    #[error("correspondence has distortion {distortion}, twice the length is {twice_length}")]
    NotOptimal { distortion: f64, twice_length: f64 },
    #[error("Lipschitz constant {lipschitz} times diameter {diameter} exceeds twice the length {budget}")]
    LipschitzBudgetExceeded { lipschitz: f64, diameter: f64, budget: f64 },
    #[error("factor space has diameter {0}, at most 2 allowed")]
    FactorTooLarge(f64),
    #[error("parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("basepoint {index} out of range for {points} points")]
    BadBasepoint { index: usize, points: usize },
    #[error("grid must contain 0 and 1")]
    GridMissingEndpoints,
    #[error("sample s = {0} lies in the branch set")]
    SampleInBranchSet(f64),
    #[error("geodesic estimate fails at s = {s}, t = {t} by {excess}")]
    GeodesicViolation {
        s: f64,
        t: f64,
        excess: f64,
        report: Box<GeodesicReport>,
    },
}

/// Provenance of a sampled point, used to rebuild the construction's
/// correspondence between two samples.
///
/// `pairs` are indices into the underlying correspondence `R ⊆ X × Y`: a
/// point of `X` carries every pair it occurs in. `factor` indexes the
/// product factor and `tail` the identifier space; `None` matches anything.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointKey {
    pub pairs: Vec<usize>,
    pub factor: Option<usize>,
    pub tail: Option<usize>,
}

impl PointKey {
    pub fn pair(k: usize) -> Self {
        Self {
            pairs: vec![k],
            factor: None,
            tail: None,
        }
    }

    pub fn matches(&self, other: &Self) -> bool {
        let loose = |a: Option<usize>, b: Option<usize>| a.is_none() || b.is_none() || a == b;
        loose(self.factor, other.factor)
            && loose(self.tail, other.tail)
            && self.pairs.iter().any(|k| other.pairs.binary_search(k).is_ok())
    }

    /// Key of a class of points merged by a quotient.
    fn merge(keys: &[&PointKey]) -> Self {
        let mut pairs: Vec<usize> = keys.iter().flat_map(|k| k.pairs.iter().copied()).collect();
        pairs.sort_unstable();
        pairs.dedup();
        let common = |f: fn(&PointKey) -> Option<usize>| {
            let first = f(keys[0]);
            keys.iter().all(|k| f(k) == first).then_some(first).flatten()
        };
        Self {
            pairs,
            factor: common(|k| k.factor),
            tail: common(|k| k.tail),
        }
    }
}

/// A point of a geodesic together with the provenance of its points.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub space: FiniteMetricSpace,
    pub keys: Vec<PointKey>,
}

impl Sample {
    /// Collapses zero-distance classes of a pseudo-metric carrier.
    pub(crate) fn from_pseudo(space: crate::space::PseudoMetricSpace, keys: Vec<PointKey>) -> Self {
        match space.into_metric() {
            Ok(space) => Self { space, keys },
            Err(pseudo) => {
                let classes = pseudo.zero_classes();
                let keys = classes
                    .iter()
                    .map(|c| PointKey::merge(&c.iter().map(|&i| &keys[i]).collect::<Vec<_>>()))
                    .collect();
                Self {
                    space: pseudo.quotient(),
                    keys,
                }
            }
        }
    }
}

/// All pairs of points whose keys match.
pub fn construction_correspondence(a: &Sample, b: &Sample) -> Result<Correspondence, GhError> {
    let pairs = a
        .keys
        .iter()
        .enumerate()
        .flat_map(|(i, ka)| {
            b.keys
                .iter()
                .enumerate()
                .filter(move |(_, kb)| ka.matches(kb))
                .map(move |(j, _)| (i, j))
        })
        .collect();
    Correspondence::new(pairs, a.space.len(), b.space.len())
}

/// Half the distortion of [`construction_correspondence`]: an upper bound on
/// the GH distance between two samples.
pub fn construction_upper(a: &Sample, b: &Sample) -> Result<f64, GhError> {
    let r = construction_correspondence(a, b)?;
    Ok(0.5 * crate::gh::pair_distortion(r.pairs(), &a.space, &b.space))
}

/// A curve `s ↦ γ(s)` in the GH space, `s ∈ [0, 1]`, with a claimed length.
pub trait GeodesicFamily {
    /// `GH(γ(0), γ(1))`.
    fn length(&self) -> f64;
    fn sample(&self, s: f64) -> Result<Sample, GeodesicError>;
}

pub(crate) fn check_parameter(s: f64) -> Result<(), GeodesicError> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(GeodesicError::ParameterOutOfRange(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_matching() {
        let x = PointKey {
            pairs: vec![0, 2],
            factor: None,
            tail: None,
        };
        let w = PointKey {
            pairs: vec![2],
            factor: Some(1),
            tail: Some(0),
        };
        assert!(x.matches(&w));
        let other_factor = PointKey {
            factor: Some(3),
            ..w.clone()
        };
        assert!(!w.matches(&other_factor));
        assert!(!PointKey::pair(1).matches(&x));
    }
}
