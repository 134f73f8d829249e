//! Quantitative forms of the doubling, uniformly disconnected and uniformly
//! perfect conditions on finite spaces, and the membership tests built on them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::space::FiniteMetricSpace;

/// Largest space for which [`doubling_profile`] scans every subset.
pub const EXACT_DOUBLING_CAP: usize = 15;

const SAMPLE_CENTERS: usize = 16;
const SAMPLE_RADII: usize = 12;
const NET_LEVELS: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("the constant is undefined on a one-point space")]
    SingletonSpace,
    #[error("resolution {t} must lie in (0, {diameter}]")]
    ResolutionOutOfRange { t: f64, diameter: f64 },
    #[error("all sampled subsets have the same scale ratio; no slope to fit")]
    DegenerateFit,
    #[error("{points} points given, at least {needed} needed")]
    TooFewPoints { points: usize, needed: usize },
    #[error("exact subset scan is limited to {cap} points, space has {points}")]
    ExactModeUnavailable { points: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Minimax distances: `out[i][j]` is the smallest possible largest step over
/// paths from `i` to `j`, read off a minimum spanning tree.
pub fn bottleneck_matrix(x: &FiniteMetricSpace) -> Vec<f64> {
    let n = x.len();
    // Prim on the complete graph
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    best[0] = 0.0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .expect("vertex left");
        in_tree[v] = true;
        if parent[v] != usize::MAX {
            let (p, w) = (parent[v], x.d(v, parent[v]));
            adj[p].push((v, w));
            adj[v].push((p, w));
        }
        for u in 0..n {
            if !in_tree[u] && x.d(v, u) < best[u] {
                best[u] = x.d(v, u);
                parent[u] = v;
            }
        }
    }
    let mut out = vec![0.0_f64; n * n];
    let mut stack = Vec::with_capacity(n);
    for src in 0..n {
        let row = &mut out[src * n..(src + 1) * n];
        let mut seen = vec![false; n];
        seen[src] = true;
        stack.push(src);
        while let Some(v) = stack.pop() {
            for &(u, w) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    row[u] = row[v].max(w);
                    stack.push(u);
                }
            }
        }
    }
    out
}

/// Largest `δ` such that every chain from `x` to `y` has a step of length at
/// least `δ·d(x, y)`: the minimum over pairs of bottleneck over distance.
pub fn ud_constant(x: &FiniteMetricSpace) -> Result<f64, AnalysisError> {
    let n = x.len();
    if n < 2 {
        return Err(AnalysisError::SingletonSpace);
    }
    let bn = bottleneck_matrix(x);
    let mut delta = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            delta = delta.min(bn[i * n + j] / x.d(i, j));
        }
    }
    Ok(delta.min(1.0))
}

/// Largest `c` such that for every point `x` and every `r ∈ [t, diam X)`
/// some `y` has `c·r ≤ d(x, y) ≤ r`.
///
/// For fixed `x` the best admissible distance is a step function of `r`, so
/// the infimum over each step is taken at its right end. Returns 1 when the
/// range of `r` is empty (`t = diam X`).
pub fn up_constant(x: &FiniteMetricSpace, t: f64) -> Result<f64, AnalysisError> {
    let diam = x.diameter();
    if !(t > 0.0 && t <= diam) {
        return Err(AnalysisError::ResolutionOutOfRange { t, diameter: diam });
    }
    let mut c = 1.0_f64;
    for i in 0..x.len() {
        let mut dists: Vec<f64> = x.row(i).iter().copied().filter(|&v| v > 0.0).collect();
        dists.sort_by(f64::total_cmp);
        dists.dedup();
        // steps [lo, hi) on which the largest distance ≤ r is `reach`
        let mut lo = 0.0_f64;
        let mut reach = 0.0;
        for hi in dists.iter().copied().chain(std::iter::once(f64::INFINITY)) {
            let (a, b) = (lo.max(t), hi.min(diam));
            if a < b {
                c = c.min(reach / b);
            }
            lo = hi;
            reach = hi;
        }
    }
    Ok(c)
}

/// Smallest `C` with `card A ≤ C·(δ(A)/α(A))^β` over the subsets considered,
/// where `δ` is diameter and `α` separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoublingProfile {
    pub constant: f64,
    /// Every subset with at least two points was checked. Otherwise the
    /// constant is a lower bound for the true one.
    pub exact: bool,
}

fn profile_term(card: usize, diam: f64, sep: f64, beta: f64) -> f64 {
    card as f64 * (sep / diam).powf(beta)
}

fn subset_scales(x: &FiniteMetricSpace, subset: &[usize]) -> (f64, f64) {
    let mut diam = 0.0_f64;
    let mut sep = f64::INFINITY;
    for (k, &a) in subset.iter().enumerate() {
        for &b in &subset[k + 1..] {
            let v = x.d(a, b);
            diam = diam.max(v);
            sep = sep.min(v);
        }
    }
    (diam, sep)
}

/// See [`DoublingProfile`]. Up to [`EXACT_DOUBLING_CAP`] points all subsets
/// are scanned; beyond that, balls, annuli inside balls and greedy nets of
/// balls at halving scales around sampled centers.
pub fn doubling_profile(x: &FiniteMetricSpace, beta: f64) -> Result<DoublingProfile, AnalysisError> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(AnalysisError::InvalidParameter(format!(
            "exponent {beta} must be finite and nonnegative"
        )));
    }
    let n = x.len();
    if n < 2 {
        return Ok(DoublingProfile {
            constant: 0.0,
            exact: true,
        });
    }
    if n <= EXACT_DOUBLING_CAP {
        return Ok(DoublingProfile {
            constant: exact_profile(x, beta),
            exact: true,
        });
    }
    let mut constant = 0.0_f64;
    let mut consider = |subset: &[usize]| {
        if subset.len() >= 2 {
            let (diam, sep) = subset_scales(x, subset);
            constant = constant.max(profile_term(subset.len(), diam, sep, beta));
        }
    };
    for center in sample_centers(n) {
        let radii = sample_radii(x, center);
        for &r in &radii {
            let ball = x.ball(center, r);
            consider(&ball);
            for &inner in radii.iter().filter(|&&v| v < r) {
                let annulus: Vec<usize> = ball.iter().copied().filter(|&p| x.d(center, p) >= inner).collect();
                consider(&annulus);
            }
            let mut eps = r;
            for _ in 0..NET_LEVELS {
                eps *= 0.5;
                let net = x.epsilon_net_of(&ball, eps);
                consider(&net);
                if net.len() == ball.len() {
                    break;
                }
            }
        }
    }
    Ok(DoublingProfile {
        constant,
        exact: false,
    })
}

fn exact_profile(x: &FiniteMetricSpace, beta: f64) -> f64 {
    let n = x.len();
    let full = 1usize << n;
    let mut diam = vec![0.0_f64; full];
    let mut sep = vec![f64::INFINITY; full];
    let mut best = 0.0_f64;
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let (mut dm, mut sp) = (diam[rest], sep[rest]);
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            dm = dm.max(x.d(low, j));
            sp = sp.min(x.d(low, j));
        }
        diam[mask] = dm;
        sep[mask] = sp;
        let card = mask.count_ones() as usize;
        if card >= 2 {
            best = best.max(profile_term(card, dm, sp, beta));
        }
    }
    best
}

fn sample_centers(n: usize) -> Vec<usize> {
    let k = n.min(SAMPLE_CENTERS);
    let mut out: Vec<usize> = (0..k).map(|i| i * n / k).collect();
    out.dedup();
    out
}

/// Distinct positive distances from `center`, thinned to at most
/// [`SAMPLE_RADII`] values spread over the sorted list.
fn sample_radii(x: &FiniteMetricSpace, center: usize) -> Vec<f64> {
    let mut radii: Vec<f64> = x.row(center).iter().copied().filter(|&v| v > 0.0).collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    if radii.len() <= SAMPLE_RADII {
        return radii;
    }
    let m = radii.len();
    let mut out: Vec<f64> = (0..SAMPLE_RADII)
        .map(|i| radii[i * (m - 1) / (SAMPLE_RADII - 1)])
        .collect();
    out.dedup();
    out
}

/// A sampled subset for the exponent fit: `(ln(δ/α), ln card)`.
pub fn assouad_samples(x: &FiniteMetricSpace) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for center in sample_centers(x.len()) {
        for r in sample_radii(x, center) {
            let ball = x.ball(center, r);
            let mut eps = r;
            for _ in 0..NET_LEVELS {
                eps *= 0.5;
                let net = x.epsilon_net_of(&ball, eps);
                if net.len() >= 2 {
                    let (diam, sep) = subset_scales(x, &net);
                    out.push(((diam / sep).ln(), (net.len() as f64).ln()));
                }
                if net.len() == ball.len() {
                    break;
                }
            }
        }
    }
    out
}

/// Least-squares slope of `ln card A` against `ln(δ(A)/α(A))` over greedy
/// nets of balls at halving scales: an estimate of the Assouad dimension.
pub fn assouad_estimate(x: &FiniteMetricSpace) -> Result<f64, AnalysisError> {
    if x.len() < 4 {
        return Err(AnalysisError::TooFewPoints {
            points: x.len(),
            needed: 4,
        });
    }
    fit_slope(&assouad_samples(x))
}

fn fit_slope(samples: &[(f64, f64)]) -> Result<f64, AnalysisError> {
    if samples.is_empty() {
        return Err(AnalysisError::DegenerateFit);
    }
    let count = samples.len() as f64;
    let mean_x = samples.iter().map(|s| s.0).sum::<f64>() / count;
    let mean_y = samples.iter().map(|s| s.1).sum::<f64>() / count;
    let sxx: f64 = samples.iter().map(|s| (s.0 - mean_x).powi(2)).sum();
    let sxy: f64 = samples.iter().map(|s| (s.0 - mean_x) * (s.1 - mean_y)).sum();
    let scale = samples.iter().map(|s| s.0.abs()).fold(0.0_f64, f64::max).max(1.0);
    if sxx <= 1e-24 * scale * scale * count {
        return Err(AnalysisError::DegenerateFit);
    }
    Ok(sxy / sxx)
}

/// The three families of spaces used to test the invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Membership {
    /// `card A ≤ C·(δ/α)^β` for all subsets.
    Doubling { constant: f64, exponent: f64 },
    /// Every chain has a step of at least `δ·d(x, y)`.
    UniformlyDisconnected { delta: f64 },
    /// Annuli `[c·r, r]` around every point are inhabited for `r ∈ [t, diam)`.
    UniformlyPerfect { c: f64, t: f64 },
}

/// Exact membership of a finite space in the given family.
pub fn membership(x: &FiniteMetricSpace, family: Membership) -> Result<bool, AnalysisError> {
    match family {
        Membership::Doubling { constant, exponent } => {
            if x.len() > EXACT_DOUBLING_CAP {
                return Err(AnalysisError::ExactModeUnavailable {
                    points: x.len(),
                    cap: EXACT_DOUBLING_CAP,
                });
            }
            Ok(doubling_profile(x, exponent)?.constant <= constant)
        }
        Membership::UniformlyDisconnected { delta } => Ok(ud_constant(x)? >= delta),
        Membership::UniformlyPerfect { c, t } => Ok(up_constant(x, t)? >= c),
    }
}

/// All invariants of one space at resolution `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    /// Fitted exponent, or 0 when the space has a single scale or fewer
    /// than four points (then `doubling_C` is just the largest cardinality).
    pub doubling_beta: f64,
    #[serde(rename = "doubling_C")]
    pub doubling_c: f64,
    pub doubling_exact: bool,
    pub ud_delta: f64,
    pub up_c: f64,
    pub resolution_t: f64,
}

pub fn analyze(x: &FiniteMetricSpace, t: f64) -> Result<InvariantReport, AnalysisError> {
    let ud_delta = ud_constant(x)?;
    let up_c = up_constant(x, t)?;
    let doubling_beta = match assouad_estimate(x) {
        Ok(beta) => beta.max(0.0),
        Err(AnalysisError::DegenerateFit | AnalysisError::TooFewPoints { .. }) => 0.0,
        Err(e) => return Err(e),
    };
    let profile = doubling_profile(x, doubling_beta)?;
    Ok(InvariantReport {
        doubling_beta,
        doubling_c: profile.constant,
        doubling_exact: profile.exact,
        ud_delta,
        up_c,
        resolution_t: t,
    })
}
