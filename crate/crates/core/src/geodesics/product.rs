use super::{GeodesicError, GeodesicFamily, PointKey, Sample, StraightGeodesic, GEODESIC_TOLERANCE};
use crate::lipschitz::LipschitzZeroSet;
use crate::space::FiniteMetricSpace;

/// `F(s) = γ(s)` for `s ∈ A` and `γ(s) ×_∞ ζ(s)·C` otherwise, where `γ` is a
/// straight geodesic and `ζ` vanishes exactly on `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductExpanded {
    base: StraightGeodesic,
    factor: FiniteMetricSpace,
    zeta: LipschitzZeroSet,
}

impl ProductExpanded {
    /// Requires `lip(ζ) · diam C ≤ 2·GH(X, Y)`.
    pub fn new(base: StraightGeodesic, factor: FiniteMetricSpace, zeta: LipschitzZeroSet) -> Result<Self, GeodesicError> {
        let budget = 2.0 * base.length();
        let diameter = factor.diameter();
        if zeta.lipschitz() * diameter > budget + GEODESIC_TOLERANCE {
            return Err(GeodesicError::LipschitzBudgetExceeded {
                lipschitz: zeta.lipschitz(),
                diameter,
                budget,
            });
        }
        Ok(Self::new_unchecked(base, factor, zeta))
    }

    /// Skips the Lipschitz budget check; the result need not be a geodesic.
    pub fn new_unchecked(base: StraightGeodesic, factor: FiniteMetricSpace, zeta: LipschitzZeroSet) -> Self {
        Self { base, factor, zeta }
    }

    pub fn base(&self) -> &StraightGeodesic {
        &self.base
    }

    pub fn point(&self, s: f64) -> Result<FiniteMetricSpace, GeodesicError> {
        Ok(self.sample(s)?.space)
    }
}

impl GeodesicFamily for ProductExpanded {
    fn length(&self) -> f64 {
        self.base.length()
    }

    fn sample(&self, s: f64) -> Result<Sample, GeodesicError> {
        let straight = self.base.sample(s)?;
        if self.zeta.contains(s) {
            return Ok(straight);
        }
        let scaled = self.factor.scale(self.zeta.eval(s))?;
        let space = straight.space.linf_product(&scaled)?;
        let keys = straight
            .keys
            .iter()
            .flat_map(|k| {
                (0..self.factor.len()).map(move |a| PointKey {
                    factor: Some(a),
                    ..k.clone()
                })
            })
            .collect();
        Ok(Sample { space, keys })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::cantor_beta;
    use crate::geodesics::{verify_geodesic, GEODESIC_TOLERANCE};
    use crate::gh::DEFAULT_NODE_BUDGET;

    fn two(d: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::validate(vec![vec![0.0, d], vec![d, 0.0]]).unwrap()
    }

    fn base() -> StraightGeodesic {
        StraightGeodesic::optimal(two(1.0), two(2.0), DEFAULT_NODE_BUDGET).unwrap()
    }

    fn factor() -> FiniteMetricSpace {
        cantor_beta(0.5, 2).unwrap().scale(2.0).unwrap()
    }

    #[test]
    fn branch_set_and_cardinality() {
        let l = base().length();
        let zeta = LipschitzZeroSet::new(vec![0.0, 0.5, 1.0], l).unwrap();
        let f = ProductExpanded::new(base(), factor(), zeta).unwrap();
        assert_eq!(f.point(0.5).unwrap(), base().point(0.5).unwrap());
        assert_eq!(f.point(0.3).unwrap().len(), 2 * 4);
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let report = verify_geodesic(&f, &grid, GEODESIC_TOLERANCE).unwrap();
        assert!(report.max_excess <= GEODESIC_TOLERANCE);
    }

    #[test]
    fn budget_is_enforced() {
        let l = base().length();
        let zeta = LipschitzZeroSet::endpoints(3.0 * l).unwrap();
        assert!(matches!(
            ProductExpanded::new(base(), factor(), zeta.clone()),
            Err(GeodesicError::LipschitzBudgetExceeded { .. })
        ));
        let f = ProductExpanded::new_unchecked(base(), factor(), zeta);
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        assert!(matches!(
            verify_geodesic(&f, &grid, GEODESIC_TOLERANCE),
            Err(GeodesicError::GeodesicViolation { .. })
        ));
    }
}
