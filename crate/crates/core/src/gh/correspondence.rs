use serde::Serialize;

use super::GhError;
use crate::space::FiniteMetricSpace;

/// A relation between the points of two spaces whose projections onto both
/// sides are onto. Pairs are kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Correspondence {
    #[serde(skip)]
    left: usize,
    #[serde(skip)]
    right: usize,
    pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(
        mut pairs: Vec<(usize, usize)>,
        left: usize,
        right: usize,
    ) -> Result<Self, GhError> {
        pairs.sort_unstable();
        pairs.dedup();
        let mut hit_left = vec![false; left];
        let mut hit_right = vec![false; right];
        for &(i, j) in &pairs {
            if i >= left || j >= right {
                return Err(GhError::InvalidCorrespondence(format!(
                    "pair ({i}, {j}) out of range for {left}×{right}"
                )));
            }
            hit_left[i] = true;
            hit_right[j] = true;
        }
        if let Some(i) = hit_left.iter().position(|h| !h) {
            return Err(GhError::InvalidCorrespondence(format!(
                "left point {i} is not covered"
            )));
        }
        if let Some(j) = hit_right.iter().position(|h| !h) {
            return Err(GhError::InvalidCorrespondence(format!(
                "right point {j} is not covered"
            )));
        }
        Ok(Self { left, right, pairs })
    }

    /// The diagonal `Δ = {(i, i)}` on an `n`-point set.
    pub fn diagonal(n: usize) -> Self {
        Self {
            left: n,
            right: n,
            pairs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    /// `{(x, f(x))} ∪ {(g(y), y)}` for maps `f: X → Y` and `g: Y → X`.
    pub fn from_maps(forward: &[usize], backward: &[usize]) -> Result<Self, GhError> {
        let pairs = forward
            .iter()
            .enumerate()
            .map(|(x, &y)| (x, y))
            .chain(backward.iter().enumerate().map(|(y, &x)| (x, y)))
            .collect();
        Self::new(pairs, forward.len(), backward.len())
    }

    /// All of `X × Y`.
    pub fn full(left: usize, right: usize) -> Self {
        Self {
            left,
            right,
            pairs: (0..left)
                .flat_map(|i| (0..right).map(move |j| (i, j)))
                .collect(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.left, self.right)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.binary_search(&(i, j)).is_ok()
    }

    /// The same relation read from `Y` to `X`.
    pub fn transpose(&self) -> Self {
        let mut pairs: Vec<_> = self.pairs.iter().map(|&(i, j)| (j, i)).collect();
        pairs.sort_unstable();
        Self {
            left: self.right,
            right: self.left,
            pairs,
        }
    }

    /// `dis(R) = max |d(x, u) − e(y, v)|` over all pairs of pairs in `R`.
    pub fn distortion(
        &self,
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
    ) -> Result<f64, GhError> {
        if (x.len(), y.len()) != (self.left, self.right) {
            return Err(GhError::InvalidCorrespondence(format!(
                "correspondence is over {}×{} points, spaces have {}×{}",
                self.left,
                self.right,
                x.len(),
                y.len()
            )));
        }
        Ok(pair_distortion(&self.pairs, x, y))
    }
}

/// Distortion of an arbitrary pair list; callers guarantee indices are in range.
pub(crate) fn pair_distortion(
    pairs: &[(usize, usize)],
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> f64 {
    let mut worst = 0.0_f64;
    for (k, &(a, b)) in pairs.iter().enumerate() {
        for &(u, v) in &pairs[k + 1..] {
            worst = worst.max((x.d(a, u) - y.d(b, v)).abs());
        }
    }
    worst
}

/// Free-function form of [`Correspondence::distortion`].
pub fn distortion(
    r: &Correspondence,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<f64, GhError> {
    r.distortion(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two(d: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::validate(vec![vec![0.0, d], vec![d, 0.0]]).unwrap()
    }

    #[test]
    fn rejects_non_onto_relations() {
        assert!(matches!(
            Correspondence::new(vec![(0, 0)], 2, 1),
            Err(GhError::InvalidCorrespondence(_))
        ));
        assert!(Correspondence::new(vec![(0, 0), (1, 0)], 2, 1).is_ok());
        assert!(Correspondence::new(vec![(0, 3)], 1, 1).is_err());
    }

    #[test]
    fn distortion_examples() {
        let x = FiniteMetricSpace::validate(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ])
        .unwrap();
        let delta = Correspondence::diagonal(3);
        assert_eq!(delta.distortion(&x, &x).unwrap(), 0.0);
        let doubled = x.scale(2.0).unwrap();
        assert_eq!(delta.distortion(&x, &doubled).unwrap(), x.diameter());

        let pt = FiniteMetricSpace::point("p");
        let star = Correspondence::full(1, 3);
        assert_eq!(star.distortion(&pt, &x).unwrap(), x.diameter());
    }

    #[test]
    fn size_mismatch_is_reported() {
        let r = Correspondence::diagonal(2);
        assert!(r.distortion(&two(1.0), &FiniteMetricSpace::point("p")).is_err());
    }

    #[test]
    fn maps_build_union_of_graphs() {
        let r = Correspondence::from_maps(&[0, 0], &[1]).unwrap();
        assert_eq!(r.pairs(), &[(0, 0), (1, 0)]);
        assert_eq!(r.transpose().pairs(), &[(0, 0), (0, 1)]);
    }
}
