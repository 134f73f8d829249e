//! Seeded generators of small random metric spaces for tests and experiments.

use rand::Rng;

use crate::space::FiniteMetricSpace;

/// `n` uniform points of `[0, 1]^dim` with the Euclidean distance.
pub fn euclidean<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> FiniteMetricSpace {
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let matrix = points
        .iter()
        .map(|p| {
            points
                .iter()
                .map(|q| p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
                .collect()
        })
        .collect();
    FiniteMetricSpace::validate(matrix).expect("distinct random points")
}

/// Shortest-path metric of the complete graph with integer weights in
/// `1..=max_weight`. All distances are small integers, so ties are common.
#[allow(clippy::needless_range_loop)]
pub fn graph_metric<R: Rng + ?Sized>(n: usize, max_weight: u32, rng: &mut R) -> FiniteMetricSpace {
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = f64::from(rng.gen_range(1..=max_weight.max(1)));
            m[i][j] = w;
            m[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = m[i][k] + m[k][j];
                if via < m[i][j] {
                    m[i][j] = via;
                }
            }
        }
    }
    FiniteMetricSpace::validate(m).expect("shortest paths form a metric")
}

/// An ultrametric from random agglomerative merging: clusters are joined
/// pairwise at increasing heights, and two points are at the height where
/// their clusters merged.
pub fn ultrametric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> FiniteMetricSpace {
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut m = vec![vec![0.0; n]; n];
    let mut height = 0.0;
    while clusters.len() > 1 {
        height += rng.gen_range(0.1..1.0);
        let a = rng.gen_range(0..clusters.len());
        let left = clusters.swap_remove(a);
        let b = rng.gen_range(0..clusters.len());
        for &i in &left {
            for &j in &clusters[b] {
                m[i][j] = height;
                m[j][i] = height;
            }
        }
        clusters[b].extend(left);
    }
    FiniteMetricSpace::validate(m).expect("merge heights form an ultrametric")
}

/// One of the generators above, chosen at random, with `n` points.
pub fn any_space<R: Rng + ?Sized>(n: usize, rng: &mut R) -> FiniteMetricSpace {
    match rng.gen_range(0..3) {
        0 => euclidean(n, 2, rng),
        1 => graph_metric(n, 4, rng),
        _ => ultrametric(n, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..8 {
            for _ in 0..20 {
                euclidean(n, 3, &mut rng).revalidate().unwrap();
                graph_metric(n, 5, &mut rng).revalidate().unwrap();
                let u = ultrametric(n, &mut rng);
                u.revalidate().unwrap();
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            assert!(u.d(a, b) <= u.d(a, c).max(u.d(c, b)));
                        }
                    }
                }
            }
        }
    }
}
