//! Finite truncations of the Cantor-type space families: telescopes,
//! sequentially metrized Cantor spaces, isosceles triples and the identifier
//! spaces `U(P_q)` parameterized by points of the Hilbert cube.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::space::{amalgam_labeled, point_cap, FiniteMetricSpace, MetricError};

/// Largest supported Cantor truncation depth (`2^12` points).
pub const MAX_CANTOR_DEPTH: u32 = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("stage {stage} has diameter {diameter}, bound is {bound}")]
    StageDiameterTooLarge { stage: usize, diameter: f64, bound: f64 },
    #[error("part ({part}, {stage}) has diameter {diameter}, bound is {bound}")]
    PartDiameterTooLarge {
        part: usize,
        stage: usize,
        diameter: f64,
        bound: f64,
    },
    #[error("Cantor depth {depth} exceeds the cap {cap}")]
    DepthTooLarge { depth: u32, cap: u32 },
    #[error("cube points have {left} and {right} coordinates")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Chord length of the unit circle for the angle `x`: `√(2 − 2 cos x)`.
pub fn chord(x: f64) -> f64 {
    (2.0 - 2.0 * x.cos()).sqrt()
}

/// Apex angle `(π/6)(t + 1)`, mapping `[0, 1]` onto `[π/6, π/3]`.
pub fn apex_angle(t: f64) -> f64 {
    (PI / 6.0) * (t + 1.0)
}

/// `2^{-k}` for a stage index.
pub fn dyadic(k: usize) -> f64 {
    0.5_f64.powi(k as i32)
}

/// A truncated point of the Hilbert cube `[0, 1]^ℕ`.
///
/// Coordinates are 1-indexed; those beyond the stored length read as 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CubePoint {
    coords: Vec<f64>,
}

impl CubePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, ConstructionError> {
        if coords.is_empty() {
            return Err(ConstructionError::InvalidParameter(
                "cube point needs at least one coordinate".into(),
            ));
        }
        if let Some(bad) = coords.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(ConstructionError::InvalidParameter(format!(
                "cube coordinate {bad} outside [0, 1]"
            )));
        }
        Ok(Self { coords })
    }

    pub fn zeros(m: usize) -> Self {
        Self {
            coords: vec![0.0; m.max(1)],
        }
    }

    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        Self {
            coords: (0..m.max(1)).map(|_| rng.gen_range(0.0..=1.0)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Coordinate `q_j` for `j ≥ 1`; zero beyond the truncation.
    pub fn coord(&self, j: usize) -> f64 {
        j.checked_sub(1)
            .and_then(|i| self.coords.get(i))
            .copied()
            .unwrap_or(0.0)
    }

    /// Equality as points of the cube, with missing coordinates read as 0.
    pub fn same_point(&self, other: &Self) -> bool {
        let m = self.dim().max(other.dim());
        (1..=m).all(|j| self.coord(j) == other.coord(j))
    }
}

impl TryFrom<Vec<f64>> for CubePoint {
    type Error = ConstructionError;
    fn try_from(coords: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(coords)
    }
}

impl From<CubePoint> for Vec<f64> {
    fn from(q: CubePoint) -> Self {
        q.coords
    }
}

/// Stages `X_1, ..., X_J` of a truncated telescope; stage `i` must have
/// diameter at most `2^{-i-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TelescopeSpec {
    stages: Vec<FiniteMetricSpace>,
}

impl TelescopeSpec {
    pub fn new(stages: Vec<FiniteMetricSpace>) -> Result<Self, ConstructionError> {
        if stages.is_empty() {
            return Err(ConstructionError::InvalidParameter(
                "telescope needs at least one stage".into(),
            ));
        }
        for (idx, stage) in stages.iter().enumerate() {
            let i = idx + 1;
            let bound = dyadic(i + 1);
            if stage.diameter() > bound {
                return Err(ConstructionError::StageDiameterTooLarge {
                    stage: i,
                    diameter: stage.diameter(),
                    bound,
                });
            }
        }
        Ok(Self { stages })
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn stages(&self) -> &[FiniteMetricSpace] {
        &self.stages
    }
}

/// The truncated telescope `{∞} ⊔ X_1 ⊔ ... ⊔ X_J`.
///
/// `d(x, y) = d_i(x, y)` inside stage `i`, `|2^{-i} − 2^{-j}|` across stages
/// `i ≠ j`, and `2^{-i}` from `∞` to stage `i`. Point 0 is `∞`; stage points
/// follow in stage order, labeled `T<i>/<label>`.
pub fn telescope(spec: &TelescopeSpec) -> Result<FiniteMetricSpace, ConstructionError> {
    let points = 1 + spec.stages.iter().map(FiniteMetricSpace::len).sum::<usize>();
    let cap = point_cap();
    if points > cap {
        return Err(MetricError::TooManyPoints { points, cap }.into());
    }
    // (stage, local index); stage 0 is the point at infinity
    let mut owner = vec![(0usize, 0usize)];
    let mut labels = vec!["inf".to_string()];
    for (idx, stage) in spec.stages.iter().enumerate() {
        for (local, l) in stage.labels().iter().enumerate() {
            owner.push((idx + 1, local));
            labels.push(format!("T{}/{l}", idx + 1));
        }
    }
    Ok(FiniteMetricSpace::from_fn_unchecked(labels, |a, b| {
        let (sa, la) = owner[a];
        let (sb, lb) = owner[b];
        match (sa, sb) {
            (0, s) | (s, 0) => dyadic(s),
            (s, t) if s == t => spec.stages[s - 1].d(la, lb),
            (s, t) => (dyadic(s) - dyadic(t)).abs(),
        }
    }))
}

/// `[1, c, c², ..., c^depth]` by repeated multiplication.
///
/// Every Cantor distance is read from this table, so callers comparing
/// against a scale such as `c^{k-1}` should take it from here too.
pub fn cantor_powers(c: f64, depth: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(depth as usize + 1);
    let mut p = 1.0;
    out.push(p);
    for _ in 0..depth {
        p *= c;
        out.push(p);
    }
    out
}

/// Depth-`k` truncation of the sequentially metrized Cantor space: binary
/// strings of length `k` with `β_c(x, y) = c^{v(x, y)}`, `v` the first
/// differing position (0-indexed). The result is an ultrametric of diameter 1.
pub fn cantor_beta(c: f64, depth: u32) -> Result<FiniteMetricSpace, ConstructionError> {
    if !(c > 0.0 && c < 1.0) {
        return Err(ConstructionError::InvalidParameter(format!(
            "Cantor ratio {c} outside (0, 1)"
        )));
    }
    if depth == 0 {
        return Err(ConstructionError::InvalidParameter(
            "Cantor depth must be at least 1".into(),
        ));
    }
    let cap_depth = MAX_CANTOR_DEPTH.min(point_cap().ilog2());
    if depth > cap_depth {
        return Err(ConstructionError::DepthTooLarge {
            depth,
            cap: cap_depth,
        });
    }
    let powers = cantor_powers(c, depth);
    let n = 1usize << depth;
    let k = depth as usize;
    let labels = (0..n).map(|i| format!("{i:0k$b}")).collect();
    Ok(FiniteMetricSpace::from_fn_unchecked(labels, |a, b| {
        // strings are read most-significant bit first
        let first_diff = ((a ^ b) as u64).leading_zeros() as usize - (64 - k);
        powers[first_diff]
    }))
}

/// Three points with legs `2^{-j-1}` (pairs {1,2}, {2,3}) and base
/// `2^{-j-1} · l(θ(q_j))` (pair {1,3}): the isosceles triangle with apex angle θ(q_j).
pub fn isosceles_triple(stage: usize, q_j: f64) -> Result<FiniteMetricSpace, ConstructionError> {
    if stage == 0 {
        return Err(ConstructionError::InvalidParameter(
            "stage index starts at 1".into(),
        ));
    }
    if !(0.0..=1.0).contains(&q_j) {
        return Err(ConstructionError::InvalidParameter(format!(
            "cube coordinate {q_j} outside [0, 1]"
        )));
    }
    let leg = dyadic(stage + 1);
    let base = leg * chord(apex_angle(q_j));
    let labels = vec!["1".into(), "2".into(), "3".into()];
    Ok(FiniteMetricSpace::from_fn_unchecked(labels, |a, b| {
        if a + b == 2 {
            base
        } else {
            leg
        }
    }))
}

/// Largest allowed diameter of a part at stage `j`: `2^{-j-1} · l(π/6)`.
pub fn part_diameter_bound(stage: usize) -> f64 {
    dyadic(stage + 1) * chord(apex_angle(0.0))
}

/// The triples `(P_{1,j}, P_{2,j}, P_{3,j})` for `j = 1..J`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailParts {
    stages: Vec<[FiniteMetricSpace; 3]>,
}

impl TailParts {
    pub fn new(stages: Vec<[FiniteMetricSpace; 3]>) -> Result<Self, ConstructionError> {
        if stages.is_empty() {
            return Err(ConstructionError::InvalidParameter(
                "tail needs at least one stage".into(),
            ));
        }
        for (idx, triple) in stages.iter().enumerate() {
            let bound = part_diameter_bound(idx + 1);
            for (p, part) in triple.iter().enumerate() {
                if part.diameter() > bound {
                    return Err(ConstructionError::PartDiameterTooLarge {
                        part: p + 1,
                        stage: idx + 1,
                        diameter: part.diameter(),
                        bound,
                    });
                }
            }
        }
        Ok(Self { stages })
    }

    /// All parts one-point.
    pub fn one_point(depth: usize) -> Result<Self, ConstructionError> {
        Self::new(
            (0..depth)
                .map(|_| std::array::from_fn(|_| FiniteMetricSpace::point("x00")))
                .collect(),
        )
    }

    /// Every part is `cantor_beta(c, cantor_depth)` scaled to the stage bound.
    pub fn cantor(depth: usize, c: f64, cantor_depth: u32) -> Result<Self, ConstructionError> {
        let base = cantor_beta(c, cantor_depth)?;
        let stages = (1..=depth)
            .map(|j| {
                let part = base.scale(part_diameter_bound(j))?;
                Ok(std::array::from_fn(|_| part.clone()))
            })
            .collect::<Result<Vec<_>, ConstructionError>>()?;
        Self::new(stages)
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn stages(&self) -> &[[FiniteMetricSpace; 3]] {
        &self.stages
    }

    /// Stage `T_j`: the three parts glued over the isosceles triple for `q_j`.
    pub fn stage_space(&self, stage: usize, q: &CubePoint) -> Result<FiniteMetricSpace, ConstructionError> {
        let gluing = isosceles_triple(stage, q.coord(stage))?;
        Ok(amalgam_labeled(
            &self.stages[stage - 1],
            &gluing,
            |k, l| format!("P{},{stage}/{l}", k + 1),
        )?)
    }

    /// The identifier space `U(P_q)`.
    pub fn u_space(&self, q: &CubePoint) -> Result<FiniteMetricSpace, ConstructionError> {
        let stages = (1..=self.depth())
            .map(|j| self.stage_space(j, q))
            .collect::<Result<Vec<_>, _>>()?;
        telescope(&TelescopeSpec::new(stages)?)
    }
}

/// Tail parts together with the cube point selecting the triangle shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct TailSpec {
    pub parts: TailParts,
    pub q: CubePoint,
}

/// `U(P_q)`: telescope over the stages `T_j` glued along `e_{j,q}`.
pub fn u_space(spec: &TailSpec) -> Result<FiniteMetricSpace, ConstructionError> {
    spec.parts.u_space(&spec.q)
}

/// `max_{i ≤ J} |l(θ(q_i)) − l(θ(r_i))| · 2^{-i-1}`: the distortion of the
/// identity correspondence between `U(P_q)` and `U(P_r)` for shared parts.
pub fn u_space_modulus(q: &CubePoint, r: &CubePoint, depth: usize) -> Result<f64, ConstructionError> {
    if q.dim() != r.dim() {
        return Err(ConstructionError::DimensionMismatch {
            left: q.dim(),
            right: r.dim(),
        });
    }
    Ok((1..=depth)
        .map(|i| {
            (chord(apex_angle(q.coord(i))) - chord(apex_angle(r.coord(i)))).abs() * dyadic(i + 1)
        })
        .fold(0.0, f64::max))
}
