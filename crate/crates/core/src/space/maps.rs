use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::space::finite::FiniteSpace;

/// A map between the point sets of two finite spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct PointMap {
    pub images: Vec<usize>,
}

impl PointMap {
    pub fn identity(n: usize) -> Self {
        PointMap { images: (0..n).collect() }
    }

    pub fn check(&self, source: &FiniteSpace, target: &FiniteSpace) -> Result<()> {
        if self.images.len() != source.len() {
            return Err(Error::domain(format!(
                "map covers {} points, source has {}",
                self.images.len(),
                source.len()
            )));
        }
        if let Some(&bad) = self.images.iter().find(|&&j| j >= target.len()) {
            return Err(Error::domain(format!("image {bad} is not a target point")));
        }
        Ok(())
    }

    pub fn apply(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&p| self.images[p]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Measured constants: `d' ≤ L·d + C` and `d ≤ L·d' + C` on every sampled
/// pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Distortion {
    pub l: f64,
    pub c: f64,
    pub pairs: usize,
}

/// Measures `(L, C)` with `L` the worst ratio in either direction and `C` the
/// residual left by that `L`. Uses all pairs when there are at most
/// `max_pairs`, else a seeded sample of that size.
pub fn measure_distortion(
    source: &FiniteSpace,
    target: &FiniteSpace,
    map: &PointMap,
    max_pairs: usize,
) -> Result<Distortion> {
    map.check(source, target)?;
    let n = source.len();
    let total = n * n.saturating_sub(1) / 2;
    let pairs: Vec<(usize, usize)> = if total <= max_pairs {
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x51ab);
        (0..max_pairs)
            .map(|_| {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                (i.min(j), i.max(j))
            })
            .collect()
    };
    let dists: Vec<(f64, f64)> = pairs
        .iter()
        .map(|&(i, j)| (source.dist(i, j), target.dist(map.images[i], map.images[j])))
        .collect();
    let l = dists
        .iter()
        .filter(|(d, e)| *d > 0.0 && *e > 0.0)
        .map(|(d, e)| (e / d).max(d / e))
        .fold(1.0, f64::max);
    let c = dists
        .iter()
        .map(|(d, e)| (e - l * d).max(d - l * e))
        .fold(0.0, f64::max);
    Ok(Distortion { l, c, pairs: pairs.len() })
}
