//! Finite samples of continuous examples: unions of lines, a planar disc and
//! the product-row space.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::space::finite::{CoordMetric, FiniteSpace, EPS};

/// Straight segment in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub from: [f64; 2],
    pub to: [f64; 2],
}

fn key(p: &[f64]) -> Vec<i64> {
    p.iter().map(|x| (x * 1e6).round() as i64).collect()
}

/// Samples each segment at `step` (endpoints included), merges coincident
/// samples and keeps the points within `radius` of `center`, which must be
/// one of the samples and becomes the basepoint.
pub fn sampled_lines(
    segments: &[Segment],
    step: f64,
    center: [f64; 2],
    radius: f64,
    metric: CoordMetric,
) -> Result<FiniteSpace> {
    if !(step > 0.0) {
        return Err(Error::domain("sampling step must be positive"));
    }
    if segments.is_empty() {
        return Err(Error::domain("no segments to sample"));
    }
    let mut pts: BTreeMap<Vec<i64>, Vec<f64>> = BTreeMap::new();
    for s in segments {
        let (dx, dy) = (s.to[0] - s.from[0], s.to[1] - s.from[1]);
        let len = (dx * dx + dy * dy).sqrt();
        let n = (len / step + EPS).floor() as usize;
        for k in 0..=n {
            let t = if len > 0.0 { k as f64 * step / len } else { 0.0 };
            let p = vec![s.from[0] + t * dx, s.from[1] + t * dy];
            pts.entry(key(&p)).or_insert(p);
        }
    }
    disc(pts.into_values().collect(), step, center, radius, metric)
}

/// Aligned grid sample of the disc of radius `radius`.
pub fn sampled_plane(step: f64, radius: f64, metric: CoordMetric) -> Result<FiniteSpace> {
    if !(step > 0.0) {
        return Err(Error::domain("sampling step must be positive"));
    }
    let n = (radius / step + EPS).floor() as i64;
    let pts: Vec<Vec<f64>> = (-n..=n)
        .flat_map(|i| (-n..=n).map(move |j| vec![i as f64 * step, j as f64 * step]))
        .collect();
    disc(pts, step, [0.0, 0.0], radius, metric)
}

fn disc(
    pts: Vec<Vec<f64>>,
    step: f64,
    center: [f64; 2],
    radius: f64,
    metric: CoordMetric,
) -> Result<FiniteSpace> {
    let dist = |p: &[f64]| match metric {
        CoordMetric::Manhattan => (p[0] - center[0]).abs() + (p[1] - center[1]).abs(),
        _ => ((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)).sqrt(),
    };
    let mut kept: Vec<Vec<f64>> = pts.into_iter().filter(|p| dist(p) <= radius + EPS).collect();
    // basepoint first, then by distance and coordinates
    kept.sort_by(|a, b| {
        dist(a)
            .partial_cmp(&dist(b))
            .unwrap()
            .then_with(|| a.partial_cmp(b).unwrap())
    });
    let base = kept
        .iter()
        .position(|p| key(p) == key(&center))
        .ok_or_else(|| Error::domain("the center is not a sample point"))?;
    FiniteSpace::coords(kept, metric, base, radius, step)
}

/// `(step·ℤ) × A` with `A = {0} ∪ {n ≥ m}` truncated to radius `radius`
/// around `(0, 0)`, under the product-row metric.
pub fn product_row(m: i64, step: f64, radius: f64) -> Result<FiniteSpace> {
    if m < 2 {
        return Err(Error::domain("product-row needs m > 1"));
    }
    if !(step > 0.0) {
        return Err(Error::domain("sampling step must be positive"));
    }
    let n = (radius / step + EPS).floor() as i64;
    let mut pts = Vec::new();
    for k in -n..=n {
        let alpha = k as f64 * step;
        pts.push(vec![alpha, 0.0]);
        let mut h = m;
        while alpha.abs() + h as f64 <= radius + EPS {
            pts.push(vec![alpha, h as f64]);
            h += 1;
        }
    }
    pts.sort_by(|a, b| {
        let ra = if a[0] == 0.0 { a[1] } else { a[0].abs() + a[1] };
        let rb = if b[0] == 0.0 { b[1] } else { b[0].abs() + b[1] };
        ra.partial_cmp(&rb).unwrap().then_with(|| a.partial_cmp(b).unwrap())
    });
    FiniteSpace::coords(pts, CoordMetric::ProductRow, 0, radius, step)
}

/// The `#`-shaped union of lines `x = 0`, `x = 2`, `y = 0`, `y = 1`.
pub fn hash_segments(extent: f64) -> Vec<Segment> {
    vec![
        Segment { from: [0.0, -extent], to: [0.0, extent] },
        Segment { from: [2.0, -extent], to: [2.0, extent] },
        Segment { from: [-extent, 0.0], to: [extent, 0.0] },
        Segment { from: [-extent, 1.0], to: [extent, 1.0] },
    ]
}
