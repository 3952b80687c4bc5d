use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::Ball;

/// Slack used for every `≤ σ` / `≥ μ` comparison on real distances.
pub const EPS: f64 = 1e-9;

const TRIANGLE_SAMPLES: usize = 1000;

/// Metric for coordinate payloads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordMetric {
    Manhattan,
    Euclidean,
    /// `(α, n)` rows: `|n − n'|` on a common α, else `|α − α'| + |n| + |n'|`.
    ProductRow,
}

#[derive(Clone, Debug)]
enum Points {
    Cayley(Ball),
    Coords { coords: Vec<Vec<f64>>, metric: CoordMetric },
    Table(Vec<Vec<f64>>),
}

/// Finite metric space with a basepoint and a truncation radius.
#[derive(Clone, Debug)]
pub struct FiniteSpace {
    points: Points,
    basepoint: usize,
    radius: f64,
    unit: f64,
    from_base: Vec<f64>,
}

impl FiniteSpace {
    /// A Cayley ball with its word metric; the basepoint is the identity.
    pub fn cayley(ball: Ball) -> Result<Self> {
        let radius = ball.radius() as f64;
        let from_base = (0..ball.len()).map(|i| ball.length(i) as f64).collect();
        let space = FiniteSpace {
            points: Points::Cayley(ball),
            basepoint: 0,
            radius,
            unit: 1.0,
            from_base,
        };
        space.spot_check()?;
        Ok(space)
    }

    /// Points with coordinates. `unit` is the sampling step (0 if none).
    pub fn coords(
        coords: Vec<Vec<f64>>,
        metric: CoordMetric,
        basepoint: usize,
        radius: f64,
        unit: f64,
    ) -> Result<Self> {
        if basepoint >= coords.len() {
            return Err(Error::domain("basepoint is not a point of the space"));
        }
        let dim = coords[0].len();
        if coords.iter().any(|c| c.len() != dim) || (metric == CoordMetric::ProductRow && dim != 2) {
            return Err(Error::domain("coordinate dimensions disagree"));
        }
        let mut space = FiniteSpace {
            points: Points::Coords { coords, metric },
            basepoint,
            radius,
            unit,
            from_base: Vec::new(),
        };
        space.finish()?;
        Ok(space)
    }

    /// Explicit distance matrix.
    pub fn table(matrix: Vec<Vec<f64>>, basepoint: usize, radius: f64) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::domain("distance table is not square"));
        }
        if basepoint >= n {
            return Err(Error::domain("basepoint is not a point of the space"));
        }
        for i in 0..n {
            for j in 0..n {
                let d = matrix[i][j];
                if !d.is_finite() || d < 0.0 || (i == j) != (d == 0.0) {
                    return Err(Error::domain(format!(
                        "table entry ({i},{j}) = {d} is not a metric value"
                    )));
                }
                if d != matrix[j][i] {
                    return Err(Error::domain(format!("table is not symmetric at ({i},{j})")));
                }
            }
        }
        let mut space = FiniteSpace {
            points: Points::Table(matrix),
            basepoint,
            radius,
            unit: 0.0,
            from_base: Vec::new(),
        };
        space.finish()?;
        Ok(space)
    }

    fn finish(&mut self) -> Result<()> {
        self.from_base = (0..self.len()).map(|i| self.dist(self.basepoint, i)).collect();
        if let Some(i) = (0..self.len()).find(|&i| self.from_base[i] > self.radius + EPS) {
            return Err(Error::domain(format!(
                "point {i} lies at distance {} > R = {} from the basepoint",
                self.from_base[i], self.radius
            )));
        }
        self.spot_check()
    }

    /// Symmetry, identity of indiscernibles and the triangle inequality on
    /// seeded random samples.
    fn spot_check(&self) -> Result<()> {
        let n = self.len();
        if n < 2 {
            return Ok(());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..TRIANGLE_SAMPLES {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            let (ab, bc, ac) = (self.dist(a, b), self.dist(b, c), self.dist(a, c));
            if (ab - self.dist(b, a)).abs() > EPS {
                return Err(Error::domain(format!("metric not symmetric on ({a},{b})")));
            }
            if a != b && ab <= 0.0 {
                return Err(Error::domain(format!("distinct points {a},{b} at distance 0")));
            }
            if ac > ab + bc + EPS {
                return Err(Error::domain(format!("triangle inequality fails on ({a},{b},{c})")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        match &self.points {
            Points::Cayley(b) => b.len(),
            Points::Coords { coords, .. } => coords.len(),
            Points::Table(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Natural resolution: 1 for word metrics, the sampling step for sampled
    /// spaces, 0 otherwise.
    pub fn unit(&self) -> f64 {
        self.unit
    }

    /// Distance from the basepoint.
    pub fn from_base(&self, i: usize) -> f64 {
        self.from_base[i]
    }

    pub fn ball(&self) -> Option<&Ball> {
        match &self.points {
            Points::Cayley(b) => Some(b),
            _ => None,
        }
    }

    pub fn coordinates(&self, i: usize) -> Option<&[f64]> {
        match &self.points {
            Points::Coords { coords, .. } => Some(&coords[i]),
            _ => None,
        }
    }

    pub fn is_graph_metric(&self) -> bool {
        matches!(self.points, Points::Cayley(_))
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match &self.points {
            Points::Cayley(b) => b.distance(i, j).value as f64,
            Points::Coords { coords, metric } => coord_dist(*metric, &coords[i], &coords[j]),
            Points::Table(m) => m[i][j],
        }
    }

    /// Human-readable name of point `i`.
    pub fn describe(&self, i: usize) -> String {
        match &self.points {
            Points::Cayley(b) => b.group().format(b.point(i)),
            Points::Coords { coords, .. } => {
                let parts: Vec<String> = coords[i].iter().map(|x| format!("{x}")).collect();
                format!("({})", parts.join(","))
            }
            Points::Table(_) => format!("#{i}"),
        }
    }

    /// Minimal distance from `p` to the points of `c`.
    pub fn distance_to_subset(&self, p: usize, c: &[usize]) -> Result<f64> {
        if c.is_empty() {
            return Err(Error::domain("distance to an empty subset"));
        }
        Ok(c.iter().map(|&q| self.dist(p, q)).fold(f64::INFINITY, f64::min))
    }

    /// `dist(p, C)` for every point.
    pub fn distances_to_subset(&self, c: &[usize]) -> Result<Vec<f64>> {
        if c.is_empty() {
            return Err(Error::domain("distance to an empty subset"));
        }
        Ok((0..self.len())
            .map(|p| c.iter().map(|&q| self.dist(p, q)).fold(f64::INFINITY, f64::min))
            .collect())
    }

    /// All pairs `i < j` with `dist(i, j) ≤ σ`, sorted.
    pub fn proximity_pairs(&self, sigma: f64) -> Vec<(usize, usize)> {
        let mut out = match &self.points {
            Points::Cayley(b) => cayley_pairs(b, sigma),
            Points::Coords { coords, metric } if *metric != CoordMetric::ProductRow && sigma > 0.0 => {
                grid_pairs(coords, *metric, sigma)
            }
            _ => {
                let n = self.len();
                let mut v = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        if self.dist(i, j) <= sigma + EPS {
                            v.push((i, j));
                        }
                    }
                }
                v
            }
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn coord_dist(metric: CoordMetric, a: &[f64], b: &[f64]) -> f64 {
    match metric {
        CoordMetric::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        CoordMetric::Euclidean => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt(),
        CoordMetric::ProductRow => {
            if a == b {
                0.0
            } else if a[0] == b[0] {
                (a[1] - b[1]).abs()
            } else {
                (a[0] - b[0]).abs() + a[1].abs() + b[1].abs()
            }
        }
    }
}

/// Pairs `(p, p·w)` over short words `w`. Words longer than the radius are
/// not in the ball, so larger σ falls back to comparing all pairs.
fn cayley_pairs(ball: &Ball, sigma: f64) -> Vec<(usize, usize)> {
    let k = (sigma + EPS).floor();
    if k < 1.0 {
        return Vec::new();
    }
    if k > ball.radius() as f64 {
        return (0..ball.len())
            .flat_map(|i| (i + 1..ball.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| ball.distance(i, j).value as f64 <= sigma + EPS)
            .collect();
    }
    let short = ball.prefix_len(k as u32);
    let group = ball.group();
    let mut out = Vec::new();
    for i in 0..ball.len() {
        let p = ball.point(i);
        for w in 1..short {
            if let Some(j) = ball.index_of(&group.multiply(p, ball.point(w))) {
                if i < j {
                    out.push((i, j));
                }
            }
        }
    }
    out
}

fn grid_pairs(coords: &[Vec<f64>], metric: CoordMetric, sigma: f64) -> Vec<(usize, usize)> {
    let cell = sigma;
    let key = |c: &[f64]| -> Vec<i64> { c.iter().map(|x| (x / cell).floor() as i64).collect() };
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, c) in coords.iter().enumerate() {
        grid.entry(key(c)).or_default().push(i);
    }
    let dim = coords.first().map_or(0, Vec::len);
    let offsets: Vec<Vec<i64>> = (0..3usize.pow(dim as u32))
        .map(|mut code| {
            (0..dim)
                .map(|_| {
                    let d = (code % 3) as i64 - 1;
                    code /= 3;
                    d
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for (i, c) in coords.iter().enumerate() {
        let k = key(c);
        for off in &offsets {
            let nk: Vec<i64> = k.iter().zip(off).map(|(a, b)| a + b).collect();
            if let Some(bucket) = grid.get(&nk) {
                for &j in bucket {
                    if i < j && coord_dist(metric, c, &coords[j]) <= sigma + EPS {
                        out.push((i, j));
                    }
                }
            }
        }
    }
    out
}
