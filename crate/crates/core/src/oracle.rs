//! Slow reference implementations used to cross-check the fast algorithms.

use crate::space::FiniteMetricSpace;

/// Largest `|X|·|Y|` accepted by [`gh_brute_force`].
pub const BRUTE_FORCE_CELLS: usize = 20;

/// `GH(X, Y)` by enumerating every subset of `X × Y`, keeping those whose
/// projections are onto. Returns `None` above [`BRUTE_FORCE_CELLS`] cells.
pub fn gh_brute_force(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Option<f64> {
    let cells: Vec<(usize, usize)> = (0..x.len())
        .flat_map(|i| (0..y.len()).map(move |j| (i, j)))
        .collect();
    if cells.len() > BRUTE_FORCE_CELLS {
        return None;
    }
    let mut chosen = Vec::with_capacity(cells.len());
    let mut best = f64::INFINITY;
    enumerate(x, y, &cells, 0, 0.0, &mut chosen, &mut best);
    Some(0.5 * best)
}

fn enumerate(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    cells: &[(usize, usize)],
    next: usize,
    current: f64,
    chosen: &mut Vec<(usize, usize)>,
    best: &mut f64,
) {
    if next == cells.len() {
        let onto_x = (0..x.len()).all(|i| chosen.iter().any(|p| p.0 == i));
        let onto_y = (0..y.len()).all(|j| chosen.iter().any(|p| p.1 == j));
        if onto_x && onto_y && current < *best {
            *best = current;
        }
        return;
    }
    let (a, b) = cells[next];
    let added = chosen
        .iter()
        .map(|&(u, v)| (x.d(a, u) - y.d(b, v)).abs())
        .fold(current, f64::max);
    chosen.push((a, b));
    enumerate(x, y, cells, next + 1, added, chosen, best);
    chosen.pop();
    enumerate(x, y, cells, next + 1, current, chosen, best);
}

/// Largest `δ` for the chain condition, by walking every simple path.
/// Exponential; meant for at most 8 points.
pub fn ud_brute_force(x: &FiniteMetricSpace) -> Option<f64> {
    let n = x.len();
    if n < 2 {
        return None;
    }
    let mut delta = f64::INFINITY;
    for a in 0..n {
        for b in (a + 1)..n {
            let mut visited = vec![false; n];
            visited[a] = true;
            let mut bottleneck = f64::INFINITY;
            walk(x, a, b, 0.0, &mut visited, &mut bottleneck);
            delta = delta.min(bottleneck / x.d(a, b));
        }
    }
    Some(delta.min(1.0))
}

fn walk(x: &FiniteMetricSpace, at: usize, target: usize, worst: f64, visited: &mut [bool], best: &mut f64) {
    if at == target {
        *best = best.min(worst);
        return;
    }
    for next in 0..x.len() {
        if !visited[next] {
            visited[next] = true;
            walk(x, next, target, worst.max(x.d(at, next)), visited, best);
            visited[next] = false;
        }
    }
}

/// Whether some permutation preserves all distances exactly. Factorial time.
pub fn isometric_brute_force(x: &FiniteMetricSpace, y: &FiniteMetricSpace, tol: f64) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..x.len()).collect();
    permute(x, y, tol, 0, &mut perm)
}

fn permute(x: &FiniteMetricSpace, y: &FiniteMetricSpace, tol: f64, k: usize, perm: &mut [usize]) -> bool {
    if k == perm.len() {
        return (0..perm.len())
            .all(|a| (0..perm.len()).all(|b| (x.d(a, b) - y.d(perm[a], perm[b])).abs() <= tol));
    }
    for swap in k..perm.len() {
        perm.swap(k, swap);
        if permute(x, y, tol, k + 1, perm) {
            return true;
        }
        perm.swap(k, swap);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two(d: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::validate(vec![vec![0.0, d], vec![d, 0.0]]).unwrap()
    }

    #[test]
    fn brute_force_two_points() {
        assert_eq!(gh_brute_force(&two(1.0), &two(2.0)), Some(0.5));
        assert_eq!(gh_brute_force(&FiniteMetricSpace::point("p"), &two(3.0)), Some(1.5));
    }

    #[test]
    fn chain_oracle_on_a_line() {
        let x = FiniteMetricSpace::validate(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(ud_brute_force(&x), Some(0.5));
    }

    #[test]
    fn permutation_oracle() {
        let x = two(1.0);
        assert!(isometric_brute_force(&x, &x, 0.0));
        assert!(!isometric_brute_force(&x, &two(1.1), 1e-9));
    }
}
