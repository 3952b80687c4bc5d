use rayon::prelude::*;

use crate::error::Result;
use crate::pairs::cosets::PairFamily;
use crate::space::{core_hausdorff, measure_distortion, Distortion, FiniteSpace, PointMap, EPS};

/// A point map with measured quasi-isometry constants and a quasi-inverse.
#[derive(Clone, Debug)]
pub struct QIMapSample {
    pub map: PointMap,
    pub inverse: PointMap,
    pub distortion: Distortion,
    /// `max(dist(q(q̄(y)), y), dist(q̄(q(x)), x))` over all points.
    pub inverse_defect: f64,
}

impl QIMapSample {
    /// Measures `map`. The quasi-inverse is the exact inverse for bijections,
    /// otherwise a nearest-image choice (smallest index on ties).
    pub fn measure(source: &FiniteSpace, target: &FiniteSpace, map: PointMap, max_pairs: usize) -> Result<Self> {
        let distortion = measure_distortion(source, target, &map, max_pairs)?;
        let mut inverse = vec![usize::MAX; target.len()];
        for (x, &y) in map.images.iter().enumerate() {
            if inverse[y] == usize::MAX {
                inverse[y] = x;
            }
        }
        let bijective = source.len() == target.len() && inverse.iter().all(|&x| x != usize::MAX);
        if !bijective {
            inverse = (0..target.len())
                .into_par_iter()
                .map(|y| {
                    let mut best = (f64::INFINITY, 0);
                    for (x, &fx) in map.images.iter().enumerate() {
                        let d = target.dist(fx, y);
                        if d < best.0 - EPS {
                            best = (d, x);
                        }
                    }
                    best.1
                })
                .collect();
        }
        let inverse = PointMap { images: inverse };
        let there = (0..target.len())
            .map(|y| target.dist(map.images[inverse.images[y]], y))
            .fold(0.0, f64::max);
        let back = (0..source.len())
            .map(|x| source.dist(inverse.images[map.images[x]], x))
            .fold(0.0, f64::max);
        Ok(QIMapSample {
            map,
            inverse,
            distortion,
            inverse_defect: there.max(back),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairCheckReport {
    /// Least grid value `M` with both projections surjective.
    pub least_m: Option<f64>,
    /// For each trusted source coset, the target cosets matched at
    /// `least_m` (or at the largest `M` on failure).
    pub matches: Vec<(usize, Vec<usize>)>,
    pub unmatched_source: Vec<usize>,
    pub unmatched_target: Vec<usize>,
}

/// `{0.5, 1, 2, …, ⌊R/2⌋}`.
pub fn default_m_grid(radius: f64) -> Vec<f64> {
    let mut out = vec![0.5];
    out.extend((1..=(radius / 2.0 + EPS).floor() as usize).map(|k| k as f64));
    out
}

/// Evaluates `{(A, B) : Hdist(q(A), B) < M}` on visible cosets. A coset is
/// trusted when its representative lies within half the radius; distances
/// are measured from the half-radius core of the target ball.
pub fn pair_qi_check(
    q: &QIMapSample,
    source: (&FiniteSpace, &PairFamily),
    target: (&FiniteSpace, &PairFamily),
    m_grid: &[f64],
) -> Result<PairCheckReport> {
    let (ss, sf) = source;
    let (ts, tf) = target;
    q.map.check(ss, ts)?;
    let s_trusted: Vec<bool> = sf.cosets.iter().map(|c| ss.from_base(c.rep) <= ss.radius() / 2.0 + EPS).collect();
    let t_trusted: Vec<bool> = tf.cosets.iter().map(|c| ts.from_base(c.rep) <= ts.radius() / 2.0 + EPS).collect();
    let core = ts.radius() / 2.0;
    let images: Vec<Vec<usize>> = sf.cosets.iter().map(|c| q.map.apply(&c.trace)).collect();
    let table: Vec<Vec<Option<f64>>> = (0..sf.len())
        .into_par_iter()
        .map(|a| {
            (0..tf.len())
                .map(|b| {
                    if s_trusted[a] || t_trusted[b] {
                        core_hausdorff(ts, &images[a], &tf.cosets[b].trace, core).ok().flatten()
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    let mut grid = m_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let mut report = PairCheckReport { least_m: None, matches: Vec::new(), unmatched_source: Vec::new(), unmatched_target: Vec::new() };
    for &m in &grid {
        let hit = |a: usize, b: usize| table[a][b].is_some_and(|h| h < m - EPS);
        let unmatched_source: Vec<usize> =
            (0..sf.len()).filter(|&a| s_trusted[a] && !(0..tf.len()).any(|b| hit(a, b))).collect();
        let unmatched_target: Vec<usize> =
            (0..tf.len()).filter(|&b| t_trusted[b] && !(0..sf.len()).any(|a| hit(a, b))).collect();
        let matches = (0..sf.len())
            .filter(|&a| s_trusted[a])
            .map(|a| (a, (0..tf.len()).filter(|&b| hit(a, b)).collect()))
            .collect();
        let ok = unmatched_source.is_empty() && unmatched_target.is_empty();
        report = PairCheckReport { least_m: ok.then_some(m), matches, unmatched_source, unmatched_target };
        if ok {
            break;
        }
    }
    Ok(report)
}
