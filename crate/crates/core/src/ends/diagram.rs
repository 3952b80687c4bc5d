use std::collections::BTreeMap;

use log::debug;
use rayon::prelude::*;

use crate::ends::verdict::{trusted, EndsConfig, Verdict};
use crate::error::{Error, Result};
use crate::space::{
    alive_from_distances, is_bijection, sigma_components_with_pairs, transition_map,
    ComponentPartition, FiniteSpace, ScalePair, EPS,
};

/// A space together with the subset `C` and the distances to it.
#[derive(Clone, Debug)]
pub struct SpacePair<'a> {
    pub space: &'a FiniteSpace,
    pub subset: Vec<usize>,
    dist: Vec<f64>,
}

impl<'a> SpacePair<'a> {
    pub fn new(space: &'a FiniteSpace, subset: &[usize]) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::domain("subset C is empty"));
        }
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        let dist = space.distances_to_subset(&subset)?;
        Ok(SpacePair { space, subset, dist })
    }

    pub fn distances(&self) -> &[f64] {
        &self.dist
    }

    pub fn partition(&self, scale: ScalePair, pairs: &[(usize, usize)], cfg: &EndsConfig) -> ComponentPartition {
        let alive = alive_from_distances(&self.dist, scale.mu);
        sigma_components_with_pairs(self.space, &alive, scale, pairs, &cfg.rule)
    }

    pub fn diagram(&self, sigma: f64, mu_grid: &[f64], cfg: &EndsConfig) -> Result<EndsDiagram> {
        let pairs = self.space.proximity_pairs(sigma);
        self.diagram_with_pairs(sigma, mu_grid, cfg, &pairs)
    }

    fn diagram_with_pairs(
        &self,
        sigma: f64,
        mu_grid: &[f64],
        cfg: &EndsConfig,
        pairs: &[(usize, usize)],
    ) -> Result<EndsDiagram> {
        check_mu_grid(mu_grid, self.space.radius())?;
        let scales: Vec<ScalePair> = mu_grid
            .iter()
            .map(|&mu| ScalePair::new(sigma, mu))
            .collect::<Result<_>>()?;
        let partitions: Vec<ComponentPartition> = scales
            .par_iter()
            .map(|&s| self.partition(s, pairs, cfg))
            .collect();
        let mut levels: Vec<Level> = Vec::with_capacity(partitions.len());
        for (k, partition) in partitions.into_iter().enumerate() {
            let (to_previous, bijective) = match levels.last() {
                Some(prev) => {
                    let map = transition_map(&partition, &prev.partition)?;
                    let bij = is_bijection(&map, &prev.partition);
                    (Some(map), bij)
                }
                None => (None, false),
            };
            levels.push(Level {
                mu: mu_grid[k],
                trusted: trusted(sigma, mu_grid[k], self.space.radius(), self.space.unit()),
                partition,
                to_previous,
                bijective,
            });
        }
        debug!(
            "sigma {sigma}: unbounded counts {:?}",
            levels.iter().map(|l| l.partition.unbounded_count()).collect::<Vec<_>>()
        );
        Ok(EndsDiagram { sigma, levels })
    }
}

fn check_mu_grid(mu_grid: &[f64], radius: f64) -> Result<()> {
    if mu_grid.is_empty() {
        return Err(Error::config("mu grid is empty"));
    }
    if mu_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("mu grid must be strictly increasing"));
    }
    if mu_grid.iter().any(|&m| !(m >= 0.0) || m > radius + EPS) {
        return Err(Error::domain(format!("mu values must lie in [0, {radius}]")));
    }
    Ok(())
}

fn check_sigma_grid(sigma_grid: &[f64]) -> Result<()> {
    if sigma_grid.is_empty() {
        return Err(Error::config("sigma grid is empty"));
    }
    if sigma_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("sigma grid must be strictly increasing"));
    }
    Ok(())
}

/// One μ level of an ends diagram.
#[derive(Clone, Debug)]
pub struct Level {
    pub mu: f64,
    pub trusted: bool,
    pub partition: ComponentPartition,
    /// Transition from this level to the previous (smaller μ) one.
    pub to_previous: Option<BTreeMap<usize, usize>>,
    /// Whether `to_previous` is a bijection of unbounded components.
    pub bijective: bool,
}

/// Unbounded σ-components over an increasing μ grid.
#[derive(Clone, Debug)]
pub struct EndsDiagram {
    pub sigma: f64,
    pub levels: Vec<Level>,
}

impl EndsDiagram {
    /// Number of leading trusted levels.
    pub fn trusted_prefix(&self) -> usize {
        self.levels.iter().take_while(|l| l.trusted).count()
    }

    /// Levels `start..=end` of the final bijective run ending at the deepest
    /// trusted level.
    pub fn final_run(&self) -> Option<(usize, usize)> {
        let t = self.trusted_prefix();
        if t == 0 {
            return None;
        }
        let end = t - 1;
        let mut start = end;
        while start > 0 && self.levels[start].bijective {
            start -= 1;
        }
        Some((start, end))
    }

    /// Stabilized window, if it spans at least `w` levels.
    pub fn stable_window(&self, w: usize) -> Option<(usize, usize)> {
        self.final_run().filter(|(s, e)| e - s + 1 >= w.max(1))
    }

    /// Composite transition from level `from` down to level `to` (`to ≤ from`).
    pub fn composite(&self, from: usize, to: usize) -> BTreeMap<usize, usize> {
        let mut map: BTreeMap<usize, usize> =
            self.levels[from].partition.unbounded_ids().into_iter().map(|c| (c, c)).collect();
        for k in (to + 1..=from).rev() {
            let step = self.levels[k].to_previous.as_ref().expect("level above 0 has a transition");
            for v in map.values_mut() {
                *v = step[v];
            }
        }
        map
    }

    pub fn verdict(&self, cfg: &EndsConfig) -> SigmaVerdict {
        let t = self.trusted_prefix();
        let counts: Vec<usize> = self.levels.iter().map(|l| l.partition.unbounded_count()).collect();
        let mut out = SigmaVerdict {
            sigma: self.sigma,
            verdict: Verdict::Inconclusive,
            window: None,
        };
        if t == 0 {
            return out;
        }
        if counts[..t].iter().any(|&c| c > cfg.n_max) {
            out.verdict = Verdict::AtLeast(cfg.n_max);
            return out;
        }
        let (s, e) = self.final_run().expect("trusted prefix is non-empty");
        if e - s + 1 >= cfg.window.max(1) {
            out.verdict = Verdict::Exact(counts[e]);
            out.window = Some((self.levels[s].mu, self.levels[e].mu));
        } else if e > 0 && counts[e] > counts[e - 1] {
            out.verdict = Verdict::AtLeast(counts[e]);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaVerdict {
    pub sigma: f64,
    pub verdict: Verdict,
    /// `[μ₁, μ₂]` on which consecutive transitions were bijections.
    pub window: Option<(f64, f64)>,
}

/// Comparison map between consecutive σ values at a common μ.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossSigma {
    pub from: f64,
    pub to: f64,
    pub mu: Option<f64>,
    pub map: BTreeMap<usize, usize>,
    pub bijective: bool,
}

#[derive(Clone, Debug)]
pub struct FilteredEndsReport {
    pub diagrams: Vec<EndsDiagram>,
    pub per_sigma: Vec<SigmaVerdict>,
    pub cross: Vec<CrossSigma>,
    pub final_verdict: Verdict,
}

pub fn ends_diagram(
    space: &FiniteSpace,
    subset: &[usize],
    sigma: f64,
    mu_grid: &[f64],
    cfg: &EndsConfig,
) -> Result<EndsDiagram> {
    SpacePair::new(space, subset)?.diagram(sigma, mu_grid, cfg)
}

pub fn filtered_ends(
    space: &FiniteSpace,
    subset: &[usize],
    sigma_grid: &[f64],
    mu_grid: &[f64],
    cfg: &EndsConfig,
) -> Result<FilteredEndsReport> {
    check_sigma_grid(sigma_grid)?;
    check_mu_grid(mu_grid, space.radius())?;
    let pair = SpacePair::new(space, subset)?;
    let diagrams: Vec<EndsDiagram> = sigma_grid
        .par_iter()
        .map(|&s| pair.diagram(s, mu_grid, cfg))
        .collect::<Result<_>>()?;
    let per_sigma: Vec<SigmaVerdict> = diagrams.iter().map(|d| d.verdict(cfg)).collect();
    let mut cross = Vec::new();
    for w in diagrams.windows(2) {
        let common = w[0].trusted_prefix().min(w[1].trusted_prefix());
        let entry = if common == 0 {
            CrossSigma { from: w[0].sigma, to: w[1].sigma, mu: None, map: BTreeMap::new(), bijective: false }
        } else {
            let k = common - 1;
            let (a, b) = (&w[0].levels[k].partition, &w[1].levels[k].partition);
            let map = transition_map(a, b)?;
            let bijective = is_bijection(&map, b);
            CrossSigma { from: w[0].sigma, to: w[1].sigma, mu: Some(w[0].levels[k].mu), map, bijective }
        };
        cross.push(entry);
    }
    let final_verdict = combine(&per_sigma, &cross);
    Ok(FilteredEndsReport { diagrams, per_sigma, cross, final_verdict })
}

fn combine(per_sigma: &[SigmaVerdict], cross: &[CrossSigma]) -> Verdict {
    let last = per_sigma.last().expect("sigma grid is non-empty").verdict;
    if per_sigma.len() == 1 {
        return last;
    }
    match last {
        Verdict::Exact(n) => {
            let prev = per_sigma[per_sigma.len() - 2].verdict;
            if prev == Verdict::Exact(n) && cross.last().is_some_and(|c| c.bijective) {
                last
            } else {
                Verdict::Inconclusive
            }
        }
        other => other,
    }
}
