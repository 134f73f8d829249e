//! Lipschitz functions on `[0, 1]` with a prescribed finite zero set, and the
//! max-difference inequality used throughout the product estimates.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZeroSetError {
    #[error("zero set must contain both 0 and 1")]
    MissingEndpoint,
    #[error("zero set entry {0} lies outside [0, 1]")]
    OutOfRange(f64),
    #[error("zero set must be strictly increasing")]
    NotSorted,
    #[error("Lipschitz constant {0} is not positive")]
    NonpositiveConstant(f64),
}

/// `ζ(x) = L · min_{a ∈ A} |x − a|` for a finite closed set `A ⊆ [0, 1]`
/// containing both endpoints.
///
/// ζ is `L`-Lipschitz and vanishes exactly on `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzZeroSet {
    zeros: Vec<f64>,
    lipschitz: f64,
}

impl LipschitzZeroSet {
    pub fn new(zeros: Vec<f64>, lipschitz: f64) -> Result<Self, ZeroSetError> {
        if !lipschitz.is_finite() || lipschitz <= 0.0 {
            return Err(ZeroSetError::NonpositiveConstant(lipschitz));
        }
        if let Some(&bad) = zeros.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(ZeroSetError::OutOfRange(bad));
        }
        if zeros.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ZeroSetError::NotSorted);
        }
        if zeros.first() != Some(&0.0) || zeros.last() != Some(&1.0) {
            return Err(ZeroSetError::MissingEndpoint);
        }
        Ok(Self { zeros, lipschitz })
    }

    /// Sorts and deduplicates `zeros` before validating.
    pub fn from_unsorted(mut zeros: Vec<f64>, lipschitz: f64) -> Result<Self, ZeroSetError> {
        if let Some(&bad) = zeros.iter().find(|a| a.is_nan()) {
            return Err(ZeroSetError::OutOfRange(bad));
        }
        zeros.sort_by(f64::total_cmp);
        zeros.dedup();
        Self::new(zeros, lipschitz)
    }

    /// Zero set `{0, 1}`.
    pub fn endpoints(lipschitz: f64) -> Result<Self, ZeroSetError> {
        Self::new(vec![0.0, 1.0], lipschitz)
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// Exact membership in the zero set.
    pub fn contains(&self, x: f64) -> bool {
        self.zeros.binary_search_by(|a| a.total_cmp(&x)).is_ok()
    }

    /// Distance from `x` to the zero set.
    pub fn distance_to_set(&self, x: f64) -> f64 {
        let idx = self.zeros.partition_point(|&a| a < x);
        let above = self.zeros.get(idx).map_or(f64::INFINITY, |a| a - x);
        let below = idx
            .checked_sub(1)
            .map_or(f64::INFINITY, |i| x - self.zeros[i]);
        above.min(below)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.lipschitz * self.distance_to_set(x)
    }
}

/// `|x ∨ y − u ∨ v| ≤ |x − u| ∨ |y − v|`.
///
/// Holds for every real quadruple, and stays exact in floating point because
/// rounding is monotone. Kept as a fuzzing target.
pub fn max_lemma_check(x: f64, y: f64, u: f64, v: f64) -> bool {
    (x.max(y) - u.max(v)).abs() <= (x - u).abs().max((y - v).abs())
}
