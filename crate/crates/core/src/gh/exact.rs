//! Exact GH distance by branch and bound over correspondences.
//!
//! Every correspondence contains a minimal one in which each pair is the
//! only cover of one of its endpoints, and distortion can only drop when
//! pairs are removed. The search therefore visits the points of `X` and `Y`
//! one at a time and, for a point not yet covered, branches on its partner.
//! Partial distortion is a max, so it only grows along a branch and any
//! branch reaching the incumbent is cut.

use super::bounds::lower_distortion;
use super::correspondence::Correspondence;
use super::{GhError, GhResult};
use crate::space::FiniteMetricSpace;

/// Default node budget for [`gh_exact`].
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Copy)]
enum Vertex {
    Left(usize),
    Right(usize),
}

struct Search<'a> {
    x: &'a FiniteMetricSpace,
    y: &'a FiniteMetricSpace,
    order: Vec<Vertex>,
    pairs: Vec<(usize, usize)>,
    covered_left: Vec<u32>,
    covered_right: Vec<u32>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl<'a> Search<'a> {
    fn new(x: &'a FiniteMetricSpace, y: &'a FiniteMetricSpace, order: Vec<Vertex>, budget: u64) -> Self {
        Self {
            x,
            y,
            order,
            pairs: Vec::new(),
            covered_left: vec![0; x.len()],
            covered_right: vec![0; y.len()],
            nodes: 0,
            budget,
            aborted: false,
        }
    }

    fn added_cost(&self, (a, b): (usize, usize)) -> f64 {
        self.pairs
            .iter()
            .map(|&(u, v)| (self.x.d(a, u) - self.y.d(b, v)).abs())
            .fold(0.0, f64::max)
    }

    fn candidates(&self, v: Vertex, current: f64) -> Vec<((usize, usize), f64)> {
        let pairs: Vec<(usize, usize)> = match v {
            Vertex::Left(i) => (0..self.y.len()).map(|j| (i, j)).collect(),
            Vertex::Right(j) => (0..self.x.len()).map(|i| (i, j)).collect(),
        };
        pairs
            .into_iter()
            .map(|p| (p, current.max(self.added_cost(p))))
            .collect()
    }

    fn is_covered(&self, v: Vertex) -> bool {
        match v {
            Vertex::Left(i) => self.covered_left[i] > 0,
            Vertex::Right(j) => self.covered_right[j] > 0,
        }
    }

    fn push(&mut self, p: (usize, usize)) {
        self.pairs.push(p);
        self.covered_left[p.0] += 1;
        self.covered_right[p.1] += 1;
    }

    fn pop(&mut self) {
        let p = self.pairs.pop().expect("pop after push");
        self.covered_left[p.0] -= 1;
        self.covered_right[p.1] -= 1;
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
        }
        !self.aborted
    }

    /// Minimizes distortion; cuts branches that cannot beat `best`.
    fn minimize(&mut self, depth: usize, current: f64, best: &mut f64, best_pairs: &mut Vec<(usize, usize)>, floor: f64) {
        if !self.tick() || *best <= floor {
            return;
        }
        let mut depth = depth;
        while depth < self.order.len() && self.is_covered(self.order[depth]) {
            depth += 1;
        }
        if depth == self.order.len() {
            if current < *best {
                *best = current;
                best_pairs.clone_from(&self.pairs);
            }
            return;
        }
        let mut cands = self.candidates(self.order[depth], current);
        cands.sort_by(|a, b| a.1.total_cmp(&b.1));
        for (p, cost) in cands {
            if cost >= *best {
                break;
            }
            self.push(p);
            self.minimize(depth + 1, cost, best, best_pairs, floor);
            self.pop();
            if self.aborted || *best <= floor {
                return;
            }
        }
    }

    /// First completion, in choice order, whose distortion stays within `target`.
    fn first_within(&mut self, depth: usize, current: f64, target: f64) -> bool {
        if !self.tick() {
            return false;
        }
        let mut depth = depth;
        while depth < self.order.len() && self.is_covered(self.order[depth]) {
            depth += 1;
        }
        if depth == self.order.len() {
            return true;
        }
        for (p, cost) in self.candidates(self.order[depth], current) {
            if cost > target {
                continue;
            }
            self.push(p);
            if self.first_within(depth + 1, cost, target) {
                return true;
            }
            self.pop();
            if self.aborted {
                return false;
            }
        }
        false
    }
}

/// Exact `GH(X, Y)` with an optimal correspondence as witness.
///
/// The first pass orders points by decreasing eccentricity and partners by
/// increasing added distortion, so large mismatches are met and cut early.
/// A second pass fixes the witness deterministically: among optimal
/// minimal correspondences, the first in lexicographic order of choices
/// (points of `X` then `Y` by index, partners by increasing index).
///
/// When the node budget runs out the best bracket found so far is returned
/// inside [`GhError::BudgetExhausted`].
pub fn gh_exact(x: &FiniteMetricSpace, y: &FiniteMetricSpace, budget: u64) -> Result<GhResult, GhError> {
    let floor = lower_distortion(x, y);
    let full = Correspondence::full(x.len(), y.len());
    let mut best = full.distortion(x, y)?;
    let mut best_pairs = full.pairs().to_vec();

    let mut order: Vec<(f64, Vertex)> = (0..x.len())
        .map(|i| (x.eccentricity(i), Vertex::Left(i)))
        .chain((0..y.len()).map(|j| (y.eccentricity(j), Vertex::Right(j))))
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    let order: Vec<Vertex> = order.into_iter().map(|(_, v)| v).collect();

    let mut search = Search::new(x, y, order, budget);
    search.minimize(0, 0.0, &mut best, &mut best_pairs, floor);
    let used = search.nodes;
    if search.aborted {
        return Err(GhError::BudgetExhausted(Box::new(GhResult {
            lower: 0.5 * floor,
            upper: 0.5 * best,
            exact: false,
            witness: Correspondence::new(best_pairs, x.len(), y.len())?,
        })));
    }

    let natural: Vec<Vertex> = (0..x.len())
        .map(Vertex::Left)
        .chain((0..y.len()).map(Vertex::Right))
        .collect();
    let mut canonical = Search::new(x, y, natural, budget.saturating_sub(used).max(1));
    let witness_pairs = if canonical.first_within(0, 0.0, best) {
        canonical.pairs
    } else {
        // value is proven; only the canonical tie-break ran out of budget
        best_pairs
    };
    let witness = Correspondence::new(witness_pairs, x.len(), y.len())?;
    let value = 0.5 * best;
    Ok(GhResult {
        lower: value,
        upper: value,
        exact: true,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two(d: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::validate(vec![vec![0.0, d], vec![d, 0.0]]).unwrap()
    }

    fn three() -> FiniteMetricSpace {
        FiniteMetricSpace::validate(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn one_point_against_anything() {
        let pt = FiniteMetricSpace::point("p");
        let r = gh_exact(&pt, &three(), DEFAULT_NODE_BUDGET).unwrap();
        assert!(r.exact);
        assert_eq!(r.upper, 1.0);
        assert_eq!(r.witness.len(), 3);
    }

    #[test]
    fn two_point_spaces() {
        // all 9 onto correspondences of {0,a} × {0,b} have distortion |a−b| or max(a,b)
        for (a, b) in [(1.0, 2.0), (0.3, 0.7), (5.0, 1.0)] {
            let r = gh_exact(&two(a), &two(b), DEFAULT_NODE_BUDGET).unwrap();
            assert_eq!(r.upper, 0.5 * f64::abs(a - b));
            assert_eq!(r.lower, r.upper);
            assert_eq!(r.witness.pairs(), &[(0, 0), (1, 1)]);
        }
    }

    #[test]
    fn self_distance_is_zero_with_diagonal() {
        let x = three();
        let r = gh_exact(&x, &x, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(r.upper, 0.0);
        assert_eq!(r.witness, Correspondence::diagonal(3));
    }

    #[test]
    fn witness_distortion_matches_value() {
        let x = three();
        let y = two(0.4);
        let r = gh_exact(&x, &y, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(r.witness.distortion(&x, &y).unwrap(), 2.0 * r.upper);
        let flipped = gh_exact(&y, &x, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(flipped.upper, r.upper);
    }

    #[test]
    fn tiny_budget_reports_bracket() {
        let x = crate::constructors::cantor_beta(0.5, 3).unwrap();
        let y = crate::constructors::cantor_beta(0.3, 3).unwrap();
        match gh_exact(&x, &y, 3) {
            Err(GhError::BudgetExhausted(b)) => {
                assert!(!b.exact);
                assert!(b.lower <= b.upper);
                assert_eq!(b.witness.distortion(&x, &y).unwrap(), 2.0 * b.upper);
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }
}
