use super::{check_parameter, GeodesicError, GeodesicFamily, PointKey, Sample, GEODESIC_TOLERANCE};
use crate::gh::{gh_exact, Correspondence};
use crate::space::{FiniteMetricSpace, PseudoMetricSpace};

/// `γ(0) = X`, `γ(1) = Y` and `γ(s) = (R, D_s)` in between, where `R` is an
/// optimal correspondence and `D_s = (1 − s)·d + s·e` on pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct StraightGeodesic {
    x: FiniteMetricSpace,
    y: FiniteMetricSpace,
    r: Correspondence,
    length: f64,
}

impl StraightGeodesic {
    /// `r` must have distortion `2·length` (within 1e-9) and `length > 0`.
    pub fn new(
        x: FiniteMetricSpace,
        y: FiniteMetricSpace,
        r: Correspondence,
        length: f64,
    ) -> Result<Self, GeodesicError> {
        if length <= 0.0 {
            return Err(GeodesicError::ZeroLength);
        }
        let distortion = r.distortion(&x, &y)?;
        if (distortion - 2.0 * length).abs() > GEODESIC_TOLERANCE {
            return Err(GeodesicError::NotOptimal {
                distortion,
                twice_length: 2.0 * length,
            });
        }
        Ok(Self { x, y, r, length })
    }

    /// Uses the witness and value of [`gh_exact`].
    pub fn optimal(x: FiniteMetricSpace, y: FiniteMetricSpace, budget: u64) -> Result<Self, GeodesicError> {
        let result = gh_exact(&x, &y, budget)?;
        Self::new(x, y, result.witness, result.upper)
    }

    pub fn x(&self) -> &FiniteMetricSpace {
        &self.x
    }

    pub fn y(&self) -> &FiniteMetricSpace {
        &self.y
    }

    pub fn correspondence(&self) -> &Correspondence {
        &self.r
    }

    /// Keys of the points of `X` (`right = false`) or `Y`.
    pub(crate) fn endpoint_keys(&self, right: bool) -> Vec<PointKey> {
        let n = if right { self.y.len() } else { self.x.len() };
        (0..n)
            .map(|p| PointKey {
                pairs: (0..self.r.len())
                    .filter(|&k| {
                        let (a, b) = self.r.pairs()[k];
                        if right {
                            b == p
                        } else {
                            a == p
                        }
                    })
                    .collect(),
                factor: None,
                tail: None,
            })
            .collect()
    }

    /// `D_s` between pairs `k` and `l` of `R`.
    pub(crate) fn interior_distance(&self, s: f64, k: usize, l: usize) -> f64 {
        let (a, b) = self.r.pairs()[k];
        let (u, v) = self.r.pairs()[l];
        (1.0 - s) * self.x.d(a, u) + s * self.y.d(b, v)
    }

    pub(crate) fn pair_labels(&self) -> Vec<String> {
        self.r
            .pairs()
            .iter()
            .map(|&(a, b)| format!("{}~{}", self.x.label(a), self.y.label(b)))
            .collect()
    }

    /// `γ(s)`; the interior is passed through the zero-distance quotient.
    pub fn point(&self, s: f64) -> Result<FiniteMetricSpace, GeodesicError> {
        Ok(self.sample(s)?.space)
    }
}

impl GeodesicFamily for StraightGeodesic {
    fn length(&self) -> f64 {
        self.length
    }

    fn sample(&self, s: f64) -> Result<Sample, GeodesicError> {
        check_parameter(s)?;
        if s == 0.0 {
            return Ok(Sample {
                space: self.x.clone(),
                keys: self.endpoint_keys(false),
            });
        }
        if s == 1.0 {
            return Ok(Sample {
                space: self.y.clone(),
                keys: self.endpoint_keys(true),
            });
        }
        let carrier = PseudoMetricSpace::from_fn_unchecked(self.pair_labels(), |k, l| {
            self.interior_distance(s, k, l)
        });
        let keys = (0..self.r.len()).map(PointKey::pair).collect();
        Ok(Sample::from_pseudo(carrier, keys))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::construction_upper;
    use crate::gh::DEFAULT_NODE_BUDGET;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two(d: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::validate(vec![vec![0.0, d], vec![d, 0.0]]).unwrap()
    }

    #[test]
    fn endpoints_and_midpoint() {
        let g = StraightGeodesic::optimal(two(1.0), two(2.0), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(g.point(0.0).unwrap(), two(1.0));
        assert_eq!(g.point(1.0).unwrap(), two(2.0));
        let mid = g.point(0.5).unwrap();
        assert_eq!(mid.len(), 2);
        assert_eq!(mid.d(0, 1), 1.5);
        mid.revalidate().unwrap();
    }

    #[test]
    fn interior_distortion_is_linear_in_s() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let x = crate::random::any_space(3, &mut rng);
            let y = crate::random::any_space(4, &mut rng);
            let Ok(g) = StraightGeodesic::optimal(x, y, DEFAULT_NODE_BUDGET) else {
                continue;
            };
            let dis = g.correspondence().distortion(g.x(), g.y()).unwrap();
            for (s, t) in [(0.1, 0.7), (0.25, 0.5), (0.9, 0.3)] {
                let a = g.sample(s).unwrap();
                let b = g.sample(t).unwrap();
                let upper = construction_upper(&a, &b).unwrap();
                assert!((2.0 * upper - (s - t).abs() * dis).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let x = two(1.0);
        assert_eq!(
            StraightGeodesic::optimal(x.clone(), x.clone(), DEFAULT_NODE_BUDGET),
            Err(GeodesicError::ZeroLength)
        );
        let r = Correspondence::full(2, 2);
        assert!(matches!(
            StraightGeodesic::new(two(1.0), two(2.0), r, 0.5),
            Err(GeodesicError::NotOptimal { .. })
        ));
        let g = StraightGeodesic::optimal(two(1.0), two(2.0), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(g.point(1.5), Err(GeodesicError::ParameterOutOfRange(1.5)));
    }
}
