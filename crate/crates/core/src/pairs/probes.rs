use std::fmt;

use crate::error::{Error, Result};
use crate::group::{trace_subset, Ball, Element, Group, SubgroupSpec, SubsetSpec};
use crate::space::{core_hausdorff, FiniteSpace, EPS};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CommensuratorVerdict {
    Bounded(f64),
    /// Least-squares slope of the Hausdorff distance against `R`.
    Diverging { slope: f64 },
    Inconclusive,
}

impl fmt::Display for CommensuratorVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommensuratorVerdict::Bounded(d) => write!(f, "bounded({d})"),
            CommensuratorVerdict::Diverging { slope } => write!(f, "diverging(slope={slope:.3})"),
            CommensuratorVerdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommensuratorReport {
    /// `(R, Hdist(P, gP))` measured from the `R − |g|` core.
    pub values: Vec<(u32, Option<f64>)>,
    pub verdict: CommensuratorVerdict,
}

/// Balls of increasing radius with a fixed subgroup traced in each, reused
/// across probes.
pub struct CommensuratorProbe {
    spaces: Vec<FiniteSpace>,
    subgroup: SubgroupSpec,
    traces: Vec<Vec<usize>>,
}

impl CommensuratorProbe {
    pub fn new(group: &Group, subgroup: &SubgroupSpec, radii: &[u32], cap: usize) -> Result<Self> {
        if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("radius list must be non-empty and increasing"));
        }
        let mut spaces = Vec::new();
        let mut traces = Vec::new();
        for &r in radii {
            let ball = Ball::build_with_cap(group, r, cap)?;
            traces.push(trace_subset(&ball, &SubsetSpec::Subgroup(subgroup.clone()))?);
            spaces.push(FiniteSpace::cayley(ball)?);
        }
        Ok(CommensuratorProbe { spaces, subgroup: subgroup.clone(), traces })
    }

    pub fn probe(&self, g: &Element) -> Result<CommensuratorReport> {
        let mut values = Vec::new();
        for (space, p_trace) in self.spaces.iter().zip(&self.traces) {
            let ball = space.ball().expect("probe spaces are Cayley balls");
            let r = ball.radius();
            let len = ball
                .index_of(g)
                .map(|i| ball.length(i) as u64)
                .or_else(|| ball.group().closed_form_length(g));
            let g_trace = trace_subset(ball, &SubsetSpec::Coset { element: g.clone(), subgroup: self.subgroup.clone() })?;
            let value = match len {
                Some(l) if (l as u32) <= r && !g_trace.is_empty() => {
                    core_hausdorff(space, p_trace, &g_trace, r as f64 - l as f64)?
                }
                _ => None,
            };
            values.push((r, value));
        }
        let verdict = classify(&values);
        Ok(CommensuratorReport { values, verdict })
    }
}

pub fn commensurator_probe(
    group: &Group,
    subgroup: &SubgroupSpec,
    g: &Element,
    radii: &[u32],
    cap: usize,
) -> Result<CommensuratorReport> {
    group.validate(g)?;
    CommensuratorProbe::new(group, subgroup, radii, cap)?.probe(g)
}

fn classify(values: &[(u32, Option<f64>)]) -> CommensuratorVerdict {
    let n = values.len();
    if n >= 2 {
        if let (Some(a), Some(b)) = (values[n - 2].1, values[n - 1].1) {
            if (a - b).abs() <= EPS {
                return CommensuratorVerdict::Bounded(b);
            }
        }
    }
    if n >= 3 {
        let tail: Option<Vec<(f64, f64)>> =
            values[n - 3..].iter().map(|&(r, v)| v.map(|v| (r as f64, v))).collect();
        if let Some(t) = tail {
            let increasing = t.windows(2).all(|w| w[1].1 > w[0].1 + EPS);
            let (r_last, v_last) = t[2];
            if increasing && v_last > r_last / 2.0 {
                let pts: Vec<(f64, f64)> =
                    values.iter().filter_map(|&(r, v)| v.map(|v| (r as f64, v))).collect();
                return CommensuratorVerdict::Diverging { slope: slope(&pts) };
            }
        }
    }
    CommensuratorVerdict::Inconclusive
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Least σ at which `S` is a single σ-component (bottleneck of a minimum
/// spanning tree).
pub fn coarse_connectedness_scale(space: &FiniteSpace, s: &[usize]) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::domain("subset is empty"));
    }
    let n = s.len();
    let mut best = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    best[0] = 0.0;
    let mut bottleneck: f64 = 0.0;
    for _ in 0..n {
        let k = (0..n).filter(|&i| !done[i]).min_by(|&a, &b| best[a].total_cmp(&best[b])).unwrap();
        done[k] = true;
        bottleneck = bottleneck.max(best[k]);
        for i in 0..n {
            if !done[i] {
                best[i] = best[i].min(space.dist(s[k], s[i]));
            }
        }
    }
    Ok(bottleneck)
}

/// Least `M` such that every point of `B` (within half the radius) lying
/// within `k` of `C` is within `M` of `B ∩ C`.
pub fn perpendicularity_bound(space: &FiniteSpace, b: &SubgroupSpec, c: &SubgroupSpec, k: f64) -> Result<f64> {
    let ball = space
        .ball()
        .ok_or_else(|| Error::config("perpendicularity needs a Cayley ball"))?;
    let bt = trace_subset(ball, &SubsetSpec::Subgroup(b.clone()))?;
    let ct = trace_subset(ball, &SubsetSpec::Subgroup(c.clone()))?;
    let mut both = trace_subset(ball, &SubsetSpec::Subgroup(SubgroupSpec::Intersection(vec![b.clone(), c.clone()])))?;
    if both.is_empty() {
        both.push(space.basepoint());
    }
    let core = space.radius() / 2.0;
    let mut m: f64 = 0.0;
    for &p in &bt {
        if space.from_base(p) > core + EPS {
            continue;
        }
        if space.distance_to_subset(p, &ct)? <= k + EPS {
            m = m.max(space.distance_to_subset(p, &both)?);
        }
    }
    Ok(m)
}
