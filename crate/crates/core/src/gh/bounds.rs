use crate::space::FiniteMetricSpace;

/// Lower bound on `GH(X, Y)` that never exceeds the exact value.
///
/// Maximum of two standard bounds:
/// - `|diam X − diam Y| / 2`, which is also the one-point-space bound
///   `|GH(pt, X) − GH(pt, Y)|`;
/// - the distance-row bound: if `(x, y) ∈ R` then the Hausdorff distance
///   between the value sets `{d(x, ·)}` and `{e(y, ·)}` is at most `dis(R)`,
///   and every `x` (resp. `y`) has some partner.
pub fn gh_lower(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    0.5 * lower_distortion(x, y)
}

/// [`gh_lower`] on the distortion scale (twice the GH bound).
pub(crate) fn lower_distortion(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    let diam = (x.diameter() - y.diameter()).abs();
    let rows_x = sorted_rows(x);
    let rows_y = sorted_rows(y);
    let mut table = vec![0.0; x.len() * y.len()];
    for (i, rx) in rows_x.iter().enumerate() {
        for (j, ry) in rows_y.iter().enumerate() {
            table[i * y.len() + j] = hausdorff_sorted(rx, ry);
        }
    }
    let from_x = (0..x.len())
        .map(|i| {
            (0..y.len())
                .map(|j| table[i * y.len() + j])
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let from_y = (0..y.len())
        .map(|j| {
            (0..x.len())
                .map(|i| table[i * y.len() + j])
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    diam.max(from_x).max(from_y)
}

fn sorted_rows(x: &FiniteMetricSpace) -> Vec<Vec<f64>> {
    (0..x.len())
        .map(|i| {
            let mut r = x.row(i).to_vec();
            r.sort_by(f64::total_cmp);
            r.dedup();
            r
        })
        .collect()
}

fn hausdorff_sorted(a: &[f64], b: &[f64]) -> f64 {
    directed(a, b).max(directed(b, a))
}

fn directed(from: &[f64], to: &[f64]) -> f64 {
    from.iter()
        .map(|&v| {
            let k = to.partition_point(|&w| w < v);
            let above = to.get(k).map_or(f64::INFINITY, |&w| (w - v).abs());
            let below = k.checked_sub(1).map_or(f64::INFINITY, |k| (v - to[k]).abs());
            above.min(below)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two(d: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::validate(vec![vec![0.0, d], vec![d, 0.0]]).unwrap()
    }

    #[test]
    fn diameter_gap() {
        assert!(gh_lower(&two(2.0), &two(1.0)) >= 0.5);
    }

    #[test]
    fn isometric_spaces_give_zero() {
        let x = FiniteMetricSpace::validate(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ])
        .unwrap();
        let perm = x.restrict(&[2, 0, 1]).unwrap();
        assert_eq!(gh_lower(&x, &perm), 0.0);
    }

    #[test]
    fn one_point_bound_is_tight() {
        let pt = FiniteMetricSpace::point("p");
        let x = FiniteMetricSpace::validate(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ])
        .unwrap();
        assert_eq!(gh_lower(&pt, &x), 1.0);
    }
}
