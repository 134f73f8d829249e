use serde::Serialize;

use super::{
    check_parameter, construction_upper, GeodesicError, GeodesicFamily, PointKey, Sample, StraightGeodesic,
    GEODESIC_TOLERANCE,
};
use crate::constructors::{CubePoint, TailParts};
use crate::gh::{fingerprints_match, isometry_oracle, ISOMETRY_POINT_CAP};
use crate::lipschitz::LipschitzZeroSet;
use crate::space::{point_cap, FiniteMetricSpace, MetricError, PseudoMetricSpace};

/// Data of the tailed family `F(s, q)`.
///
/// `W = R × C` carries `E_s = D_s ×_∞ ζ₁(s)·h`, with `ζ₁` vanishing exactly
/// at 0 and 1. Off the branch set `A` (the zeros of `ζ₂`) the identifier
/// `U_q` is attached at the basepoint `o ∈ W`:
/// `Z_q = W × {∞} ∪ {o} × U_q` with `H = E_s ×_∞ ζ₂(s)·e_q`.
/// On `A` the family is the product-expanded geodesic `(W, E_s)`, so all
/// curves `q` agree there. Both `ζ` have Lipschitz constant `GH(X, Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSpec {
    base: StraightGeodesic,
    factor: FiniteMetricSpace,
    zeta1: LipschitzZeroSet,
    zeta2: LipschitzZeroSet,
    tail: TailParts,
    basepoint: usize,
}

impl BranchSpec {
    /// `branch_set` must contain 0 and 1; the factor must have diameter at
    /// most 2; `basepoint` indexes `W` as `pair · |C| + factor point`.
    pub fn new(
        base: StraightGeodesic,
        factor: FiniteMetricSpace,
        branch_set: Vec<f64>,
        tail: TailParts,
        basepoint: usize,
    ) -> Result<Self, GeodesicError> {
        let diameter = factor.diameter();
        if diameter > 2.0 + GEODESIC_TOLERANCE {
            return Err(GeodesicError::FactorTooLarge(diameter));
        }
        let length = base.length();
        let zeta1 = LipschitzZeroSet::endpoints(length)?;
        let zeta2 = LipschitzZeroSet::from_unsorted(branch_set, length)?;
        let w = base.correspondence().len() * factor.len();
        if basepoint >= w {
            return Err(GeodesicError::BadBasepoint {
                index: basepoint,
                points: w,
            });
        }
        let tail_points: usize = tail.stages().iter().flatten().map(FiniteMetricSpace::len).sum();
        let points = w + tail_points;
        let cap = point_cap();
        if points > cap {
            return Err(MetricError::TooManyPoints { points, cap }.into());
        }
        Ok(Self {
            base,
            factor,
            zeta1,
            zeta2,
            tail,
            basepoint,
        })
    }

    pub fn base(&self) -> &StraightGeodesic {
        &self.base
    }

    pub fn branch_set(&self) -> &LipschitzZeroSet {
        &self.zeta2
    }

    pub fn tail(&self) -> &TailParts {
        &self.tail
    }

    pub fn length(&self) -> f64 {
        self.base.length()
    }

    /// `|W| = |R|·|C|`.
    pub fn w_len(&self) -> usize {
        self.base.correspondence().len() * self.factor.len()
    }

    fn w_coords(&self, w: usize) -> (usize, usize) {
        (w / self.factor.len(), w % self.factor.len())
    }

    fn w_distance(&self, s: f64, v: usize, w: usize) -> f64 {
        let (k, a) = self.w_coords(v);
        let (l, b) = self.w_coords(w);
        self.base
            .interior_distance(s, k, l)
            .max(self.zeta1.eval(s) * self.factor.d(a, b))
    }

    fn w_labels(&self) -> Vec<String> {
        let pairs = self.base.pair_labels();
        let mut out = Vec::with_capacity(self.w_len());
        for p in &pairs {
            for c in self.factor.labels() {
                out.push(format!("{p}/{c}"));
            }
        }
        out
    }

    fn w_key(&self, w: usize) -> PointKey {
        let (k, a) = self.w_coords(w);
        PointKey {
            pairs: vec![k],
            factor: Some(a),
            tail: None,
        }
    }

    /// `(Z_q, H_{s,q})` for `s ∈ (0, 1)`. On the branch set this is a
    /// pseudo-metric whose quotient is `(W, E_s)`.
    pub fn carrier(&self, s: f64, q: &CubePoint) -> Result<(PseudoMetricSpace, Vec<PointKey>), GeodesicError> {
        if !(s > 0.0 && s < 1.0) {
            return Err(GeodesicError::ParameterOutOfRange(s));
        }
        let u = self.tail.u_space(q)?;
        let w = self.w_len();
        let scale = self.zeta2.eval(s);
        let o = self.basepoint;
        let mut labels: Vec<String> = self.w_labels().into_iter().map(|l| format!("W:{l}")).collect();
        labels.extend(u.labels()[1..].iter().map(|l| format!("U:{l}")));
        let mut keys: Vec<PointKey> = (0..w)
            .map(|v| PointKey {
                tail: Some(0),
                ..self.w_key(v)
            })
            .collect();
        keys.extend((1..u.len()).map(|t| PointKey {
            tail: Some(t),
            ..self.w_key(o)
        }));
        // points of Z as (point of W, point of U), index 0 of U being ∞
        let coords = |z: usize| if z < w { (z, 0) } else { (o, z - w + 1) };
        let space = PseudoMetricSpace::from_fn_unchecked(labels, |a, b| {
            let (wa, ua) = coords(a);
            let (wb, ub) = coords(b);
            self.w_distance(s, wa, wb).max(scale * u.d(ua, ub))
        });
        Ok((space, keys))
    }

    /// `F(s, q)` with provenance keys.
    pub fn sample(&self, s: f64, q: &CubePoint) -> Result<Sample, GeodesicError> {
        check_parameter(s)?;
        if s == 0.0 || s == 1.0 {
            return self.base.sample(s);
        }
        if self.zeta2.contains(s) {
            let space = PseudoMetricSpace::from_fn_unchecked(self.w_labels(), |v, w| self.w_distance(s, v, w));
            let keys = (0..self.w_len()).map(|v| self.w_key(v)).collect();
            return Ok(Sample::from_pseudo(space, keys));
        }
        let (space, keys) = self.carrier(s, q)?;
        Ok(Sample::from_pseudo(space, keys))
    }

    /// `F(s, q)`.
    pub fn point(&self, s: f64, q: &CubePoint) -> Result<FiniteMetricSpace, GeodesicError> {
        Ok(self.sample(s, q)?.space)
    }

    /// The geodesic `s ↦ F(s, q)`.
    pub fn along<'a>(&'a self, q: &'a CubePoint) -> BunchCurve<'a> {
        BunchCurve { spec: self, q }
    }
}

/// One curve `s ↦ F(s, q)` of a bunch.
#[derive(Debug, Clone, Copy)]
pub struct BunchCurve<'a> {
    spec: &'a BranchSpec,
    q: &'a CubePoint,
}

impl GeodesicFamily for BunchCurve<'_> {
    fn length(&self) -> f64 {
        self.spec.length()
    }

    fn sample(&self, s: f64) -> Result<Sample, GeodesicError> {
        self.spec.sample(s, self.q)
    }
}

/// How a pair of samples was shown to be non-isometric.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Certificate {
    /// Different cardinalities or distance multisets.
    Fingerprint,
    /// Exhaustive isometry search found none.
    IsometryOracle,
    /// `GH > lower − cross > 0` from the geodesic property of each curve.
    Sandwich { lower: f64, cross: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PairVerdict {
    Isometric,
    NonIsometric { certificate: Certificate },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairOutcome {
    pub first: usize,
    pub second: usize,
    pub verdict: PairVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistinctnessReport {
    pub outcomes: Vec<PairOutcome>,
    pub certified: usize,
    pub isometric: usize,
    pub inconclusive: usize,
}

/// `L − upper(0, s) − upper(t, 1)` along the curve `q`, for `s < t`.
fn sandwich_lower(spec: &BranchSpec, q: &CubePoint, s: f64, t: f64) -> Result<f64, GeodesicError> {
    let (s, t) = if s <= t { (s, t) } else { (t, s) };
    let start = spec.sample(0.0, q)?;
    let end = spec.sample(1.0, q)?;
    let up_s = construction_upper(&start, &spec.sample(s, q)?)?;
    let up_t = construction_upper(&spec.sample(t, q)?, &end)?;
    Ok(spec.length() - up_s - up_t)
}

/// Tries to certify that `F(s, q)` and `F(t, r)` are not isometric for every
/// pair of samples, all taken off the branch set.
///
/// Pairs with `s ≠ t` are first separated by the geodesic property: along
/// one curve the distance is pinned near `|s − t|·L`, and moving between
/// curves at a fixed `s` costs at most the identity distortion. Otherwise
/// the distance multisets are compared and small spaces go to the exact
/// isometry search. Pairs that none of these settle are inconclusive.
pub fn bunch_distinctness(
    spec: &BranchSpec,
    samples: &[(f64, CubePoint)],
    tol: f64,
) -> Result<DistinctnessReport, GeodesicError> {
    for (s, _) in samples {
        check_parameter(*s)?;
        if spec.zeta2.contains(*s) {
            return Err(GeodesicError::SampleInBranchSet(*s));
        }
    }
    let spaces: Vec<Sample> = samples
        .iter()
        .map(|(s, q)| spec.sample(*s, q))
        .collect::<Result<_, _>>()?;
    let mut outcomes = Vec::new();
    for i in 0..samples.len() {
        for j in (i + 1)..samples.len() {
            let verdict = judge(spec, &samples[i], &samples[j], &spaces[i], &spaces[j], tol)?;
            outcomes.push(PairOutcome {
                first: i,
                second: j,
                verdict,
            });
        }
    }
    let count = |f: fn(&PairVerdict) -> bool| outcomes.iter().filter(|o| f(&o.verdict)).count();
    Ok(DistinctnessReport {
        certified: count(|v| matches!(v, PairVerdict::NonIsometric { .. })),
        isometric: count(|v| matches!(v, PairVerdict::Isometric)),
        inconclusive: count(|v| matches!(v, PairVerdict::Inconclusive)),
        outcomes,
    })
}

fn judge(
    spec: &BranchSpec,
    (s, q): &(f64, CubePoint),
    (t, r): &(f64, CubePoint),
    a: &Sample,
    b: &Sample,
    tol: f64,
) -> Result<PairVerdict, GeodesicError> {
    if a.space == b.space {
        return Ok(PairVerdict::Isometric);
    }
    let certified = |certificate| Ok(PairVerdict::NonIsometric { certificate });
    if s != t {
        // GH(F(s,q), F(t,r)) ≥ GH(F(s,q), F(t,q)) − GH(F(t,q), F(t,r)), and symmetrically
        let via_q = (
            sandwich_lower(spec, q, *s, *t)?,
            construction_upper(&spec.sample(*t, q)?, b)?,
        );
        let via_r = (
            sandwich_lower(spec, r, *s, *t)?,
            construction_upper(a, &spec.sample(*s, r)?)?,
        );
        let (lower, cross) = if via_q.0 - via_q.1 >= via_r.0 - via_r.1 {
            via_q
        } else {
            via_r
        };
        if lower - cross > tol {
            return certified(Certificate::Sandwich { lower, cross });
        }
    }
    if !fingerprints_match(&a.space, &b.space) {
        return certified(Certificate::Fingerprint);
    }
    if a.space.len() <= ISOMETRY_POINT_CAP {
        return match isometry_oracle(&a.space, &b.space)? {
            None => certified(Certificate::IsometryOracle),
            Some(_) => Ok(PairVerdict::Isometric),
        };
    }
    Ok(PairVerdict::Inconclusive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{cantor_beta, u_space_modulus};
    use crate::geodesics::verify_geodesic;
    use crate::gh::DEFAULT_NODE_BUDGET;

    fn two(d: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::validate(vec![vec![0.0, d], vec![d, 0.0]]).unwrap()
    }

    fn spec(branch: Vec<f64>, depth: usize) -> BranchSpec {
        let base = StraightGeodesic::optimal(two(1.0), two(2.0), DEFAULT_NODE_BUDGET).unwrap();
        let factor = cantor_beta(0.5, 1).unwrap();
        BranchSpec::new(base, factor, branch, TailParts::one_point(depth).unwrap(), 0).unwrap()
    }

    fn q(v: &[f64]) -> CubePoint {
        CubePoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn endpoints_branch_and_sizes() {
        let sp = spec(vec![0.0, 0.5, 1.0], 2);
        let (a, b) = (q(&[0.1, 0.9]), q(&[0.7, 0.2]));
        assert_eq!(sp.point(0.0, &a).unwrap(), two(1.0));
        assert_eq!(sp.point(1.0, &b).unwrap(), two(2.0));
        assert_eq!(sp.point(0.5, &a).unwrap(), sp.point(0.5, &b).unwrap());
        // |W| = 2·2, |U| = 1 + 2·3
        let z = sp.point(0.3, &a).unwrap();
        assert_eq!(z.len(), 4 + 7 - 1);
        z.revalidate().unwrap();
    }

    #[test]
    fn carrier_on_branch_set_collapses_to_w() {
        let sp = spec(vec![0.0, 0.5, 1.0], 2);
        let (carrier, _) = sp.carrier(0.5, &q(&[0.3, 0.3])).unwrap();
        assert!(!carrier.is_metric());
        assert_eq!(carrier.quotient().to_rows(), sp.point(0.5, &q(&[0.0])).unwrap().to_rows());
    }

    #[test]
    fn every_curve_is_a_geodesic() {
        let sp = spec(vec![0.0, 0.5, 1.0], 2);
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        for coords in [[0.0, 0.0], [1.0, 0.3], [0.5, 1.0]] {
            let point = q(&coords);
            let report = verify_geodesic(&sp.along(&point), &grid, GEODESIC_TOLERANCE).unwrap();
            assert!(report.max_lower_gap <= 1e-8, "{}", report.max_lower_gap);
        }
    }

    #[test]
    fn curves_move_continuously_in_q() {
        let sp = spec(vec![0.0, 0.5, 1.0], 2);
        let (a, b) = (q(&[0.2, 0.4]), q(&[0.6, 0.1]));
        for s in [0.1, 0.3, 0.8] {
            let up = construction_upper(&sp.sample(s, &a).unwrap(), &sp.sample(s, &b).unwrap()).unwrap();
            let bound = 0.5 * sp.branch_set().eval(s) * u_space_modulus(&a, &b, 2).unwrap();
            assert!(up <= bound + 1e-12, "{up} > {bound}");
        }
    }

    #[test]
    fn distinct_parameters_are_certified() {
        let sp = spec(vec![0.0, 0.5, 1.0], 1);
        let samples = vec![
            (0.25, q(&[0.0])),
            (0.25, q(&[0.5])),
            (0.75, q(&[0.0])),
            (0.25, q(&[0.0])),
        ];
        let report = bunch_distinctness(&sp, &samples, GEODESIC_TOLERANCE).unwrap();
        assert_eq!(report.inconclusive, 0);
        assert_eq!(report.isometric, 1);
        assert_eq!(report.certified, 5);
        assert!(matches!(
            report.outcomes[1].verdict,
            PairVerdict::NonIsometric {
                certificate: Certificate::Sandwich { .. }
            }
        ));
        assert!(matches!(
            bunch_distinctness(&sp, &[(0.5, q(&[0.0]))], GEODESIC_TOLERANCE),
            Err(GeodesicError::SampleInBranchSet(_))
        ));
    }

    #[test]
    fn rejects_large_factor_and_bad_basepoint() {
        let base = StraightGeodesic::optimal(two(1.0), two(2.0), DEFAULT_NODE_BUDGET).unwrap();
        let tail = TailParts::one_point(1).unwrap();
        assert!(matches!(
            BranchSpec::new(base.clone(), two(3.0), vec![0.0, 1.0], tail.clone(), 0),
            Err(GeodesicError::FactorTooLarge(_))
        ));
        assert!(matches!(
            BranchSpec::new(base, two(1.0), vec![0.0, 1.0], tail, 4),
            Err(GeodesicError::BadBasepoint { index: 4, points: 4 })
        ));
    }
}
