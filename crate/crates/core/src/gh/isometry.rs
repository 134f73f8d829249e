//! Exact isometry search between small finite spaces.

use super::GhError;
use crate::space::FiniteMetricSpace;

/// Default size cap for [`isometry_oracle`].
pub const ISOMETRY_POINT_CAP: usize = 10;

/// Absolute tolerance when comparing distances.
pub const ISOMETRY_TOLERANCE: f64 = 1e-9;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= ISOMETRY_TOLERANCE
}

fn sorted_equal(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(&u, &v)| close(u, v))
}

/// True when the sorted pairwise-distance multisets agree within tolerance.
/// A mismatch certifies that no isometry exists.
pub fn fingerprints_match(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> bool {
    x.len() == y.len() && sorted_equal(&x.distance_multiset(), &y.distance_multiset())
}

/// Distance-preserving bijection `X → Y` (as `image[i]`), if one exists.
/// Spaces are limited to [`ISOMETRY_POINT_CAP`] points.
pub fn isometry_oracle(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<Option<Vec<usize>>, GhError> {
    find_isometry(x, y, ISOMETRY_POINT_CAP)
}

/// [`isometry_oracle`] with an explicit size cap.
///
/// Backtracks over assignments; a point may only map to points with the same
/// sorted distance row, and points with the fewest such candidates go first.
pub fn find_isometry(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    cap: usize,
) -> Result<Option<Vec<usize>>, GhError> {
    if x.len() != y.len() {
        return Err(GhError::SizeMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n > cap {
        return Err(GhError::TooLarge { points: n, cap });
    }
    if !fingerprints_match(x, y) {
        return Ok(None);
    }
    let sorted = |s: &FiniteMetricSpace, i: usize| {
        let mut r = s.row(i).to_vec();
        r.sort_by(f64::total_cmp);
        r
    };
    let rows_x: Vec<Vec<f64>> = (0..n).map(|i| sorted(x, i)).collect();
    let rows_y: Vec<Vec<f64>> = (0..n).map(|j| sorted(y, j)).collect();
    let candidates: Vec<Vec<usize>> = rows_x
        .iter()
        .map(|rx| (0..n).filter(|&j| sorted_equal(rx, &rows_y[j])).collect())
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (candidates[i].len(), i));

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let found = assign(0, &order, &candidates, x, y, &mut image, &mut used);
    Ok(found.then_some(image))
}

fn assign(
    depth: usize,
    order: &[usize],
    candidates: &[Vec<usize>],
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let i = order[depth];
    for &j in &candidates[i] {
        if used[j] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&k| close(x.d(i, k), y.d(j, image[k])));
        if !consistent {
            continue;
        }
        image[i] = j;
        used[j] = true;
        if assign(depth + 1, order, candidates, x, y, image, used) {
            return true;
        }
        used[j] = false;
        image[i] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{CubePoint, TailParts};

    #[test]
    fn finds_relabeling() {
        let x = FiniteMetricSpace::validate(vec![
            vec![0.0, 1.0, 2.0, 2.5],
            vec![1.0, 0.0, 1.5, 2.0],
            vec![2.0, 1.5, 0.0, 1.0],
            vec![2.5, 2.0, 1.0, 0.0],
        ])
        .unwrap();
        let perm = [3, 1, 0, 2];
        let y = x.restrict(&perm).unwrap();
        let image = isometry_oracle(&x, &y).unwrap().expect("isometric");
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(x.d(a, b), y.d(image[a], image[b]));
            }
        }
    }

    #[test]
    fn different_scales_are_not_isometric() {
        let a = FiniteMetricSpace::validate(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let b = a.scale(2.0).unwrap();
        assert_eq!(isometry_oracle(&a, &b).unwrap(), None);
    }

    #[test]
    fn identifier_spaces_with_different_first_coordinate() {
        let parts = TailParts::one_point(1).unwrap();
        let u = parts.u_space(&CubePoint::new(vec![0.2]).unwrap()).unwrap();
        let v = parts.u_space(&CubePoint::new(vec![0.7]).unwrap()).unwrap();
        assert_eq!(isometry_oracle(&u, &v).unwrap(), None);
        assert!(isometry_oracle(&u, &u).unwrap().is_some());
    }

    #[test]
    fn size_errors() {
        let a = FiniteMetricSpace::point("p");
        let b = crate::constructors::cantor_beta(0.5, 1).unwrap();
        assert!(matches!(
            isometry_oracle(&a, &b),
            Err(GhError::SizeMismatch { left: 1, right: 2 })
        ));
        let big = crate::constructors::cantor_beta(0.5, 4).unwrap();
        assert!(matches!(
            isometry_oracle(&big, &big),
            Err(GhError::TooLarge { points: 16, cap: 10 })
        ));
        assert!(find_isometry(&big, &big, 16).unwrap().is_some());
    }
}
