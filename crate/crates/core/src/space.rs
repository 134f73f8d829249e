//! Finite metric spaces stored as dense, validated distance matrices.
//!
//! Everything else in the crate composes these: products, amalgams,
//! rescalings, subspaces and nets all produce a new [`FiniteMetricSpace`].
//! Values are immutable once built and can be shared across threads.

use thiserror::Error;

/// Default cap on the number of points of a constructed space.
pub const DEFAULT_POINT_CAP: usize = 4096;

/// Environment variable overriding [`DEFAULT_POINT_CAP`].
pub const POINT_CAP_ENV: &str = "GHLAB_MAX_POINTS";

/// Relative tolerance of the triangle-inequality check, scaled by the largest entry.
pub const TRIANGLE_RTOL: f64 = 1e-9;

/// Current cap on constructed space sizes.
pub fn point_cap() -> usize {
    std::env::var(POINT_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_POINT_CAP)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("a metric space needs at least one point")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("{labels} labels given for a {points}-point matrix")]
    LabelMismatch { labels: usize, points: usize },
    #[error("entry ({0}, {1}) is not finite")]
    NonFiniteEntry(usize, usize),
    #[error("entry ({0}, {1}) is negative")]
    NegativeEntry(usize, usize),
    #[error("diagonal entry ({0}, {0}) is nonzero")]
    NonzeroDiagonal(usize),
    #[error("entries ({0}, {1}) and ({1}, {0}) differ")]
    AsymmetricMatrix(usize, usize),
    #[error("distinct points {0} and {1} are at distance zero")]
    ZeroDistance(usize, usize),
    /// `d(a, b) > d(a, via) + d(via, b)` beyond tolerance, reported as `(a, b, via)`.
    #[error("triangle inequality fails: d({0}, {1}) > d({0}, {2}) + d({2}, {1})")]
    TriangleViolation(usize, usize, usize),
    #[error("separation is undefined on a one-point space")]
    SingletonSpace,
    #[error("product would have {points} points, cap is {cap}")]
    ProductTooLarge { points: usize, cap: usize },
    #[error("construction would have {points} points, cap is {cap}")]
    TooManyPoints { points: usize, cap: usize },
    #[error("diameter of part {0} exceeds the separation of the gluing metric")]
    DiameterExceedsSeparation(usize),
    #[error("{parts} parts given for a gluing metric on {expected} points")]
    PartCountMismatch { parts: usize, expected: usize },
    #[error("scale factor {0} is not positive")]
    NonpositiveScale(f64),
    #[error("index {index} out of range for a {points}-point space")]
    IndexOutOfRange { index: usize, points: usize },
    #[error("subset is empty or repeats index {0}")]
    BadSubset(usize),
}

/// Checks the metric (or pseudo-metric) axioms on a flat row-major matrix and
/// names the first offending index tuple.
#[allow(clippy::needless_range_loop)]
fn check_axioms(n: usize, dist: &[f64], allow_zero: bool) -> Result<(), MetricError> {
    let at = |i: usize, j: usize| dist[i * n + j];
    for i in 0..n {
        for j in 0..n {
            if !at(i, j).is_finite() {
                return Err(MetricError::NonFiniteEntry(i, j));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if at(i, j) < 0.0 {
                return Err(MetricError::NegativeEntry(i, j));
            }
        }
    }
    for i in 0..n {
        if at(i, i) != 0.0 {
            return Err(MetricError::NonzeroDiagonal(i));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if at(i, j) != at(j, i) {
                return Err(MetricError::AsymmetricMatrix(i, j));
            }
        }
    }
    if !allow_zero {
        for i in 0..n {
            for j in (i + 1)..n {
                if at(i, j) == 0.0 {
                    return Err(MetricError::ZeroDistance(i, j));
                }
            }
        }
    }
    let largest = dist.iter().copied().fold(0.0_f64, f64::max);
    let tol = TRIANGLE_RTOL * largest;
    for a in 0..n {
        let row_a = &dist[a * n..(a + 1) * n];
        for b in (a + 1)..n {
            let limit = row_a[b] - tol;
            for via in 0..n {
                if via == a || via == b {
                    continue;
                }
                if row_a[via] + at(via, b) < limit {
                    return Err(MetricError::TriangleViolation(a, b, via));
                }
            }
        }
    }
    Ok(())
}

fn flatten(matrix: Vec<Vec<f64>>) -> Result<(usize, Vec<f64>), MetricError> {
    let n = matrix.len();
    if n == 0 {
        return Err(MetricError::Empty);
    }
    let mut flat = Vec::with_capacity(n * n);
    for (row, values) in matrix.into_iter().enumerate() {
        if values.len() != n {
            return Err(MetricError::NotSquare {
                row,
                len: values.len(),
                expected: n,
            });
        }
        flat.extend(values);
    }
    Ok((n, flat))
}

/// Default labels `x00, x01, ...`, zero-padded to at least two digits.
pub fn default_labels(n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len().max(2);
    (0..n).map(|i| format!("x{i:0width$}")).collect()
}

/// A finite metric space: labeled points with a full symmetric distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    n: usize,
}

impl FiniteMetricSpace {
    /// Validates a square matrix and wraps it with default labels.
    pub fn validate(matrix: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let (n, dist) = flatten(matrix)?;
        Self::from_flat(default_labels(n), dist)
    }

    pub fn with_labels(labels: Vec<String>, matrix: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let (_, dist) = flatten(matrix)?;
        Self::from_flat(labels, dist)
    }

    /// Validates a row-major matrix of `labels.len()²` entries.
    pub fn from_flat(labels: Vec<String>, dist: Vec<f64>) -> Result<Self, MetricError> {
        let n = labels.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        if dist.len() != n * n {
            return Err(MetricError::LabelMismatch {
                labels: n,
                points: (dist.len() as f64).sqrt() as usize,
            });
        }
        check_axioms(n, &dist, false)?;
        Ok(Self { labels, dist, n })
    }

    /// Builds a space whose metric axioms are guaranteed by the caller's construction.
    pub(crate) fn from_fn_unchecked(
        labels: Vec<String>,
        mut entry: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        let n = labels.len();
        debug_assert!(n > 0);
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = entry(i, j);
                dist[i * n + j] = v;
                dist[j * n + i] = v;
            }
        }
        Self { labels, dist, n }
    }

    /// The one-point space.
    pub fn point(label: impl Into<String>) -> Self {
        Self {
            labels: vec![label.into()],
            dist: vec![0.0],
            n: 1,
        }
    }

    /// Re-runs the metric axioms on this space.
    pub fn revalidate(&self) -> Result<(), MetricError> {
        check_axioms(self.n, &self.dist, false)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    /// Row-major distance matrix.
    pub fn matrix(&self) -> &[f64] {
        &self.dist
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Replaces the labels, keeping the metric.
    pub fn relabeled(mut self, labels: Vec<String>) -> Result<Self, MetricError> {
        if labels.len() != self.n {
            return Err(MetricError::LabelMismatch {
                labels: labels.len(),
                points: self.n,
            });
        }
        self.labels = labels;
        Ok(self)
    }

    /// Largest distance; zero for a one-point space.
    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest distance between distinct points.
    pub fn separation(&self) -> Result<f64, MetricError> {
        if self.n < 2 {
            return Err(MetricError::SingletonSpace);
        }
        let mut best = f64::INFINITY;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                best = best.min(self.d(i, j));
            }
        }
        Ok(best)
    }

    /// Largest distance from `i` to any point.
    pub fn eccentricity(&self, i: usize) -> f64 {
        self.row(i).iter().copied().fold(0.0, f64::max)
    }

    /// Multiplies every distance by `factor`.
    pub fn scale(&self, factor: f64) -> Result<Self, MetricError> {
        if !factor.is_finite() || factor <= 0.0 {
            return Err(MetricError::NonpositiveScale(factor));
        }
        Ok(Self {
            labels: self.labels.clone(),
            dist: self.dist.iter().map(|d| d * factor).collect(),
            n: self.n,
        })
    }

    /// The ℓ∞ product: points `(x, y)` in x-major order, distance
    /// `max(d(x, u), e(y, v))`.
    pub fn linf_product(&self, other: &Self) -> Result<Self, MetricError> {
        let points = self.n * other.n;
        let cap = point_cap();
        if points > cap {
            return Err(MetricError::ProductTooLarge { points, cap });
        }
        let m = other.n;
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("({a},{b})")))
            .collect();
        Ok(Self::from_fn_unchecked(labels, |i, j| {
            self.d(i / m, j / m).max(other.d(i % m, j % m))
        }))
    }

    /// The subspace on `indices`, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self, MetricError> {
        if indices.is_empty() {
            return Err(MetricError::BadSubset(0));
        }
        let mut seen = vec![false; self.n];
        for &i in indices {
            if i >= self.n {
                return Err(MetricError::IndexOutOfRange {
                    index: i,
                    points: self.n,
                });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(MetricError::BadSubset(i));
            }
        }
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        Ok(Self::from_fn_unchecked(labels, |a, b| {
            self.d(indices[a], indices[b])
        }))
    }

    /// Greedy maximal ε-net: scans points in index order and keeps a point
    /// when it is at distance at least `eps` from every point kept so far.
    ///
    /// The result is ε-separated and every point lies within an open ε-ball
    /// of some kept point. With `eps` at most the separation every point is kept.
    pub fn epsilon_net(&self, eps: f64) -> Vec<usize> {
        self.epsilon_net_of(&(0..self.n).collect::<Vec<_>>(), eps)
    }

    /// Greedy ε-net of the subset `candidates`, scanned in the given order.
    pub fn epsilon_net_of(&self, candidates: &[usize], eps: f64) -> Vec<usize> {
        let mut net: Vec<usize> = Vec::new();
        for &c in candidates {
            if net.iter().all(|&s| self.d(s, c) >= eps) {
                net.push(c);
            }
        }
        net
    }

    /// Closed ball `B(center, radius)` as sorted indices.
    pub fn ball(&self, center: usize, radius: f64) -> Vec<usize> {
        (0..self.n)
            .filter(|&j| self.d(center, j) <= radius)
            .collect()
    }

    /// Sorted distances over unordered pairs of distinct points.
    pub fn distance_multiset(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                out.push(self.d(i, j));
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }
}

/// Glues `parts` along a metric `gluing` on `{1..n}`: distances inside a part
/// are kept, points of parts `i ≠ j` are at distance `gluing(i, j)`.
///
/// Requires every part's diameter to be at most the separation of `gluing`,
/// which makes the result a metric. Labels are prefixed `P<k>/`.
pub fn amalgam(
    parts: &[FiniteMetricSpace],
    gluing: &FiniteMetricSpace,
) -> Result<FiniteMetricSpace, MetricError> {
    amalgam_labeled(parts, gluing, |k, label| format!("P{}/{label}", k + 1))
}

pub(crate) fn amalgam_labeled(
    parts: &[FiniteMetricSpace],
    gluing: &FiniteMetricSpace,
    mut label: impl FnMut(usize, &str) -> String,
) -> Result<FiniteMetricSpace, MetricError> {
    if parts.len() != gluing.len() {
        return Err(MetricError::PartCountMismatch {
            parts: parts.len(),
            expected: gluing.len(),
        });
    }
    let sep = if gluing.len() >= 2 {
        gluing.separation()?
    } else {
        f64::INFINITY
    };
    for (k, part) in parts.iter().enumerate() {
        if part.diameter() > sep {
            return Err(MetricError::DiameterExceedsSeparation(k));
        }
    }
    let points: usize = parts.iter().map(FiniteMetricSpace::len).sum();
    let cap = point_cap();
    if points > cap {
        return Err(MetricError::TooManyPoints { points, cap });
    }
    let mut owner = Vec::with_capacity(points);
    let mut labels = Vec::with_capacity(points);
    for (k, part) in parts.iter().enumerate() {
        for (local, l) in part.labels().iter().enumerate() {
            owner.push((k, local));
            labels.push(label(k, l));
        }
    }
    Ok(FiniteMetricSpace::from_fn_unchecked(labels, |a, b| {
        let (ka, la) = owner[a];
        let (kb, lb) = owner[b];
        if ka == kb {
            parts[ka].d(la, lb)
        } else {
            gluing.d(ka, kb)
        }
    }))
}

/// A finite pseudo-metric space: like [`FiniteMetricSpace`] but distinct
/// points may be at distance zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    n: usize,
}

impl PseudoMetricSpace {
    pub fn validate(labels: Vec<String>, matrix: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let (n, dist) = flatten(matrix)?;
        if labels.len() != n {
            return Err(MetricError::LabelMismatch {
                labels: labels.len(),
                points: n,
            });
        }
        check_axioms(n, &dist, true)?;
        Ok(Self { labels, dist, n })
    }

    pub(crate) fn from_fn_unchecked(
        labels: Vec<String>,
        mut entry: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        let n = labels.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = entry(i, j);
                dist[i * n + j] = v;
                dist[j * n + i] = v;
            }
        }
        Self { labels, dist, n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// True when no two distinct points are at distance zero.
    pub fn is_metric(&self) -> bool {
        (0..self.n).all(|i| ((i + 1)..self.n).all(|j| self.d(i, j) > 0.0))
    }

    /// Zero-distance classes, each listed by increasing index, ordered by
    /// their smallest member.
    pub fn zero_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let members: Vec<usize> = (i..self.n)
                .filter(|&j| class_of[j] == usize::MAX && self.d(i, j) == 0.0)
                .collect();
            for &j in &members {
                class_of[j] = id;
            }
            classes.push(members);
        }
        classes
    }

    /// Collapses zero-distance classes; each class is represented by its
    /// first member, whose label it keeps.
    ///
    /// Under the triangle inequality the induced distance does not depend on
    /// the representatives; the result is a genuine metric.
    pub fn quotient(&self) -> FiniteMetricSpace {
        let classes = self.zero_classes();
        let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
        debug_assert!(self.quotient_is_well_defined(&classes));
        let labels = reps.iter().map(|&r| self.labels[r].clone()).collect();
        FiniteMetricSpace::from_fn_unchecked(labels, |a, b| self.d(reps[a], reps[b]))
    }

    fn quotient_is_well_defined(&self, classes: &[Vec<usize>]) -> bool {
        let largest = self.dist.iter().copied().fold(0.0_f64, f64::max);
        let tol = TRIANGLE_RTOL * largest.max(1.0);
        classes.iter().enumerate().all(|(a, ca)| {
            classes.iter().skip(a + 1).all(|cb| {
                let reference = self.d(ca[0], cb[0]);
                ca.iter()
                    .all(|&i| cb.iter().all(|&j| (self.d(i, j) - reference).abs() <= tol))
            })
        })
    }

    /// Converts to a metric space when no zero off-diagonal entries exist.
    pub fn into_metric(self) -> Result<FiniteMetricSpace, Self> {
        if self.is_metric() {
            Ok(FiniteMetricSpace {
                labels: self.labels,
                dist: self.dist,
                n: self.n,
            })
        } else {
            Err(self)
        }
    }
}

impl From<FiniteMetricSpace> for PseudoMetricSpace {
    fn from(space: FiniteMetricSpace) -> Self {
        Self {
            labels: space.labels,
            dist: space.dist,
            n: space.n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points: &[f64]) -> FiniteMetricSpace {
        let m = points
            .iter()
            .map(|a| points.iter().map(|b| (a - b).abs()).collect())
            .collect();
        FiniteMetricSpace::validate(m).unwrap()
    }

    /// Brute-force triple loop over every ordered (i, j, k).
    fn naive_is_metric(m: &[Vec<f64>]) -> bool {
        let n = m.len();
        let largest = m.iter().flatten().copied().fold(0.0_f64, f64::max);
        let tol = TRIANGLE_RTOL * largest;
        for i in 0..n {
            if m[i][i] != 0.0 {
                return false;
            }
            for j in 0..n {
                if !m[i][j].is_finite() || m[i][j] < 0.0 || m[i][j] != m[j][i] {
                    return false;
                }
                if i != j && m[i][j] == 0.0 {
                    return false;
                }
                for k in 0..n {
                    if m[i][k] > m[i][j] + m[j][k] + tol {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn smallest_space_validates() {
        let x = FiniteMetricSpace::validate(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x.labels(), ["x00", "x01"]);
    }

    #[test]
    fn validate_names_first_offender() {
        assert_eq!(
            FiniteMetricSpace::validate(vec![vec![0.0, 1.0], vec![2.0, 0.0]]),
            Err(MetricError::AsymmetricMatrix(0, 1))
        );
        assert_eq!(
            FiniteMetricSpace::validate(vec![
                vec![0.0, 1.0, 3.0],
                vec![1.0, 0.0, 1.0],
                vec![3.0, 1.0, 0.0]
            ]),
            Err(MetricError::TriangleViolation(0, 2, 1))
        );
        assert_eq!(
            FiniteMetricSpace::validate(vec![vec![0.5, 1.0], vec![1.0, 0.0]]),
            Err(MetricError::NonzeroDiagonal(0))
        );
        assert_eq!(
            FiniteMetricSpace::validate(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]),
            Err(MetricError::NegativeEntry(0, 1))
        );
        assert_eq!(
            FiniteMetricSpace::validate(vec![vec![0.0, 0.0], vec![0.0, 0.0]]),
            Err(MetricError::ZeroDistance(0, 1))
        );
        assert_eq!(
            FiniteMetricSpace::validate(vec![vec![0.0, 1.0]]),
            Err(MetricError::NotSquare {
                row: 0,
                len: 2,
                expected: 1
            })
        );
        assert_eq!(FiniteMetricSpace::validate(vec![]), Err(MetricError::Empty));
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn validate_agrees_with_triple_loop() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let n = rng.gen_range(1..6);
            let mut m = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = f64::from(rng.gen_range(0..5u8));
                    m[i][j] = v;
                    m[j][i] = v;
                }
            }
            if rng.gen_bool(0.1) && n > 1 {
                m[0][n - 1] += 0.5;
            }
            assert_eq!(
                FiniteMetricSpace::validate(m.clone()).is_ok(),
                naive_is_metric(&m),
                "{m:?}"
            );
        }
    }

    #[test]
    fn diameter_and_separation() {
        let two = FiniteMetricSpace::validate(vec![vec![0.0, 0.7], vec![0.7, 0.0]]).unwrap();
        assert_eq!(two.diameter(), 0.7);
        assert_eq!(two.separation(), Ok(0.7));
        let one = FiniteMetricSpace::point("p");
        assert_eq!(one.diameter(), 0.0);
        assert_eq!(one.separation(), Err(MetricError::SingletonSpace));
        let tri = FiniteMetricSpace::validate(vec![
            vec![0.0, 2.0, 2.0],
            vec![2.0, 0.0, 2.0],
            vec![2.0, 2.0, 0.0],
        ])
        .unwrap();
        assert_eq!((tri.diameter(), tri.separation().unwrap()), (2.0, 2.0));
    }

    #[test]
    fn product_examples() {
        let a = line(&[0.0, 1.0]);
        let b = line(&[0.0, 3.0]);
        let p = a.linf_product(&b).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.d(0, 3), 3.0);
        p.revalidate().unwrap();

        let unit = a.linf_product(&a).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(unit.d(i, j), if i == j { 0.0 } else { 1.0 });
            }
        }

        let pt = FiniteMetricSpace::point("o");
        let copy = pt.linf_product(&b).unwrap();
        assert_eq!(copy.matrix(), b.matrix());
    }

    #[test]
    fn scale_examples() {
        let two = line(&[0.0, 0.7]);
        assert_eq!(two.scale(1.0).unwrap(), two);
        assert_eq!(two.scale(2.0).unwrap().d(0, 1), 1.4);
        assert_eq!(two.scale(0.0), Err(MetricError::NonpositiveScale(0.0)));
        assert!(matches!(
            two.scale(-1.0),
            Err(MetricError::NonpositiveScale(_))
        ));
    }

    #[test]
    fn amalgam_examples() {
        let pt = FiniteMetricSpace::point("p");
        let e = line(&[0.0, 1.0]);
        let two = amalgam(&[pt.clone(), pt.clone()], &e).unwrap();
        assert_eq!(two.d(0, 1), 1.0);

        let small = line(&[0.0, 0.2]);
        let tri = FiniteMetricSpace::validate(vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap();
        let six = amalgam(&[small.clone(), small.clone(), small.clone()], &tri).unwrap();
        assert_eq!(six.len(), 6);
        six.revalidate().unwrap();
        for i in 0..6 {
            for j in 0..6 {
                if i / 2 != j / 2 {
                    assert_eq!(six.d(i, j), 1.0);
                }
            }
        }
        assert_eq!(six.label(3), "P2/x01");

        let wide = line(&[0.0, 2.0]);
        assert_eq!(
            amalgam(&[wide.clone(), pt], &e),
            Err(MetricError::DiameterExceedsSeparation(0))
        );
    }

    #[test]
    fn epsilon_net_on_a_line() {
        let x = line(&[0.0, 1.0, 2.0, 3.0]);
        let net = x.epsilon_net(1.5);
        assert_eq!(net, vec![0, 2]);
        assert_eq!(x.epsilon_net(10.0), vec![0]);
        assert_eq!(x.epsilon_net(1.0), vec![0, 1, 2, 3]);
    }

    #[test]
    fn epsilon_net_conditions_by_brute_force() {
        let x = line(&[0.0, 1.0, 2.0, 3.0]);
        let eps = 1.5;
        let is_net = |s: &[usize]| {
            s.iter()
                .all(|&a| s.iter().all(|&b| a == b || x.d(a, b) >= eps))
                && (0..4).all(|p| s.iter().any(|&c| x.d(c, p) < eps))
        };
        let valid: Vec<Vec<usize>> = (1u32..16)
            .map(|mask| (0..4).filter(|i| mask >> i & 1 == 1).collect())
            .filter(|s: &Vec<usize>| is_net(s))
            .collect();
        assert!(valid.contains(&x.epsilon_net(eps)));
        assert!(valid.iter().all(|s| s.len() == 2));
    }

    #[test]
    fn quotient_collapses_zero_classes() {
        let p = PseudoMetricSpace::validate(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![0.0, 0.0, 1.0],
                vec![0.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
            ],
        )
        .unwrap();
        assert!(!p.is_metric());
        let q = p.quotient();
        assert_eq!(q.len(), 2);
        assert_eq!(q.d(0, 1), 1.0);
        assert_eq!(q.labels(), ["a", "c"]);

        let genuine = line(&[0.0, 1.0, 3.0]);
        let back = PseudoMetricSpace::from(genuine.clone()).quotient();
        assert_eq!(back, genuine);
    }

    #[test]
    fn restrict_checks_indices() {
        let x = line(&[0.0, 1.0, 3.0]);
        let sub = x.restrict(&[2, 0]).unwrap();
        assert_eq!(sub.d(0, 1), 3.0);
        assert_eq!(sub.labels(), ["x02", "x00"]);
        assert_eq!(x.restrict(&[0, 0]), Err(MetricError::BadSubset(0)));
        assert!(x.restrict(&[5]).is_err());
    }
}
