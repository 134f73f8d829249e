use serde::Serialize;

use super::{construction_upper, GeodesicError, GeodesicFamily, Sample};

/// Bounds on `GH(γ(s), γ(t))` for one grid pair `s < t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPair {
    pub s: f64,
    pub t: f64,
    /// Half the distortion of the construction's correspondence.
    pub upper: f64,
    /// `L − upper(0, s) − upper(t, 1)`, valid when `L` is the exact distance.
    pub lower: f64,
    /// `|s − t|·L`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicReport {
    pub length: f64,
    pub tolerance: f64,
    pub pairs: Vec<GridPair>,
    /// Largest `upper − bound`.
    pub max_excess: f64,
    /// Largest `bound − lower`.
    pub max_lower_gap: f64,
}

/// Checks `GH(γ(s), γ(t)) ≤ |s − t|·L` on all grid pairs through the
/// construction's correspondences, and records the matching lower bounds
/// obtained from the triangle inequality through both endpoints.
///
/// Together the two bounds pin every sampled distance to `|s − t|·L`.
/// Fails with [`GeodesicError::GeodesicViolation`] at the worst pair when an
/// upper bound exceeds `|s − t|·L + tol`.
pub fn verify_geodesic<G: GeodesicFamily + ?Sized>(
    family: &G,
    grid: &[f64],
    tol: f64,
) -> Result<GeodesicReport, GeodesicError> {
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    if grid.first() != Some(&0.0) || grid.last() != Some(&1.0) {
        return Err(GeodesicError::GridMissingEndpoints);
    }
    let length = family.length();
    let samples: Vec<Sample> = grid.iter().map(|&s| family.sample(s)).collect::<Result<_, _>>()?;
    let last = grid.len() - 1;
    let m = grid.len();
    let mut upper = vec![0.0; m * m];
    for i in 0..m {
        for j in (i + 1)..m {
            let u = construction_upper(&samples[i], &samples[j])?;
            upper[i * m + j] = u;
            upper[j * m + i] = u;
        }
    }
    let mut pairs = Vec::with_capacity(m * (m - 1) / 2);
    let mut worst: Option<(f64, f64, f64)> = None;
    let mut max_excess = f64::NEG_INFINITY;
    let mut max_lower_gap = f64::NEG_INFINITY;
    for i in 0..m {
        for j in (i + 1)..m {
            let (s, t) = (grid[i], grid[j]);
            let bound = (t - s) * length;
            let up = upper[i * m + j];
            let lower = length - upper[i] - upper[j * m + last];
            let excess = up - bound;
            if excess > max_excess {
                max_excess = excess;
                if excess > tol {
                    worst = Some((s, t, excess));
                }
            }
            max_lower_gap = max_lower_gap.max(bound - lower);
            pairs.push(GridPair {
                s,
                t,
                upper: up,
                lower,
                bound,
            });
        }
    }
    let report = GeodesicReport {
        length,
        tolerance: tol,
        pairs,
        max_excess,
        max_lower_gap,
    };
    match worst {
        Some((s, t, excess)) => Err(GeodesicError::GeodesicViolation {
            s,
            t,
            excess,
            report: Box::new(report),
        }),
        None => Ok(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::{PointKey, StraightGeodesic, GEODESIC_TOLERANCE};
    use crate::gh::DEFAULT_NODE_BUDGET;
    use crate::space::FiniteMetricSpace;

    fn two(d: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::validate(vec![vec![0.0, d], vec![d, 0.0]]).unwrap()
    }

    struct Constant(FiniteMetricSpace);

    impl GeodesicFamily for Constant {
        fn length(&self) -> f64 {
            0.0
        }

        fn sample(&self, _s: f64) -> Result<Sample, GeodesicError> {
            Ok(Sample {
                space: self.0.clone(),
                keys: (0..self.0.len()).map(PointKey::pair).collect(),
            })
        }
    }

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn straight_two_point_geodesic_is_tight() {
        let g = StraightGeodesic::optimal(two(1.0), two(2.0), DEFAULT_NODE_BUDGET).unwrap();
        let report = verify_geodesic(&g, &grid(11), GEODESIC_TOLERANCE).unwrap();
        assert_eq!(report.pairs.len(), 55);
        for p in &report.pairs {
            assert!((p.upper - p.bound).abs() <= 1e-9, "{p:?}");
            assert!((p.lower - p.bound).abs() <= 1e-9, "{p:?}");
        }
    }

    #[test]
    fn constant_family_passes() {
        let report = verify_geodesic(&Constant(two(1.0)), &grid(5), GEODESIC_TOLERANCE).unwrap();
        assert_eq!(report.max_excess, 0.0);
    }

    #[test]
    fn grid_needs_endpoints() {
        assert_eq!(
            verify_geodesic(&Constant(two(1.0)), &[0.0, 0.5], GEODESIC_TOLERANCE),
            Err(GeodesicError::GridMissingEndpoints)
        );
    }
}
