use crate::space::FiniteMetricSpace;

/// A pair of maps `f: X → Y`, `g: Y → X` claimed to be an ε-approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsApproximation {
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
    pub eps: f64,
}

/// The defining conditions, numbered as usually stated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxCondition {
    /// The maps are not total functions between the given point sets.
    NotTotal,
    /// `|d(x, x') − e(f x, f x')| < ε` for all `x, x'`.
    ForwardDistortion,
    /// `|e(y, y') − d(g y, g y')| < ε` for all `y, y'`.
    BackwardDistortion,
    /// `d(g f x, x) < ε` and `e(f g y, y) < ε`.
    RoundTrip,
}

impl EpsApproximation {
    /// Conditions that fail. Comparisons are strict with zero tolerance.
    pub fn failed_conditions(&self, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Vec<ApproxCondition> {
        let (f, g, eps) = (&self.forward, &self.backward, self.eps);
        if f.len() != x.len()
            || g.len() != y.len()
            || f.iter().any(|&v| v >= y.len())
            || g.iter().any(|&u| u >= x.len())
        {
            return vec![ApproxCondition::NotTotal];
        }
        let mut failed = Vec::new();
        let forward_ok = (0..x.len())
            .all(|a| (0..x.len()).all(|b| (x.d(a, b) - y.d(f[a], f[b])).abs() < eps));
        if !forward_ok {
            failed.push(ApproxCondition::ForwardDistortion);
        }
        let backward_ok = (0..y.len())
            .all(|a| (0..y.len()).all(|b| (y.d(a, b) - x.d(g[a], g[b])).abs() < eps));
        if !backward_ok {
            failed.push(ApproxCondition::BackwardDistortion);
        }
        let trips_ok = (0..x.len()).all(|a| x.d(g[f[a]], a) < eps)
            && (0..y.len()).all(|b| y.d(f[g[b]], b) < eps);
        if !trips_ok {
            failed.push(ApproxCondition::RoundTrip);
        }
        failed
    }

    /// Completes `f` to a `3ε`-approximation when `f` distorts distances by
    /// less than `eps` and the open `eps`-balls around `f(X)` cover `Y`.
    ///
    /// `g(y)` is a preimage of the image point nearest to `y` (smallest index
    /// on ties). Returns `None` if either hypothesis fails.
    pub fn complete_forward(
        forward: Vec<usize>,
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
        eps: f64,
    ) -> Option<Self> {
        if forward.len() != x.len() || forward.iter().any(|&v| v >= y.len()) {
            return None;
        }
        let distortion_ok = (0..x.len())
            .all(|a| (0..x.len()).all(|b| (x.d(a, b) - y.d(forward[a], forward[b])).abs() < eps));
        if !distortion_ok {
            return None;
        }
        let mut backward = Vec::with_capacity(y.len());
        for target in 0..y.len() {
            let (source, gap) = (0..x.len())
                .map(|a| (a, y.d(forward[a], target)))
                .min_by(|p, q| p.1.total_cmp(&q.1))?;
            if gap >= eps {
                return None;
            }
            backward.push(source);
        }
        Some(Self {
            forward,
            backward,
            eps: 3.0 * eps,
        })
    }
}

/// True iff all three ε-approximation conditions hold strictly.
pub fn check_eps_approx(a: &EpsApproximation, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> bool {
    a.failed_conditions(x, y).is_empty()
}
