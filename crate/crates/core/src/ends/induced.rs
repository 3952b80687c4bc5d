use std::collections::{BTreeMap, BTreeSet};

use crate::ends::diagram::{EndsDiagram, SpacePair};
use crate::ends::verdict::EndsConfig;
use crate::error::{Error, Result};
use crate::space::{PointMap, ScalePair, EPS};

/// Source side of an induced end map.
#[derive(Clone, Copy, Debug)]
pub struct InducedSide<'a, 'b> {
    pub pair: &'a SpacePair<'b>,
    pub sigma: f64,
    pub mu_grid: &'a [f64],
}

/// End-class map induced by a `(λ, ε)` quasi-isometric point map.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedEndMap {
    pub lambda: f64,
    pub epsilon: f64,
    /// Measured `max_{c' ∈ C'} dist(c', f(C))`.
    pub r: f64,
    pub target_sigma: f64,
    pub source_classes: Vec<usize>,
    pub target_classes: Vec<usize>,
    pub map: BTreeMap<usize, usize>,
    pub bijective: bool,
    /// Source μ levels at which the map was evaluated; all agreed.
    pub levels: Vec<f64>,
}

fn stable(d: &EndsDiagram, cfg: &EndsConfig, side: &str) -> Result<(usize, usize)> {
    d.stable_window(cfg.window)
        .ok_or_else(|| Error::Inconclusive(format!("{side} diagram at sigma {} never stabilizes", d.sigma)))
}

/// Maps each stable source end class to the target end class containing its
/// image. Levels whose target component still holds several target ends are
/// skipped. Target σ defaults to `λσ + ε`; the target's own μ grid is used only
/// to find its stable classes.
pub fn induced_end_map(
    f: &PointMap,
    lambda: f64,
    epsilon: f64,
    source: InducedSide,
    target: InducedSide,
    cfg: &EndsConfig,
) -> Result<InducedEndMap> {
    let (sp, tp) = (source.pair, target.pair);
    f.check(sp.space, tp.space)?;
    if !(lambda >= 1.0) || !(epsilon >= 0.0) {
        return Err(Error::domain("need lambda >= 1 and epsilon >= 0"));
    }
    let min_sigma = lambda * source.sigma + epsilon;
    let target_sigma = if target.sigma > 0.0 { target.sigma } else { min_sigma };
    if target_sigma < min_sigma - EPS {
        return Err(Error::domain(format!(
            "target sigma {target_sigma} is below lambda*sigma + epsilon = {min_sigma}"
        )));
    }
    let image_c = f.apply(&sp.subset);
    let r = tp
        .subset
        .iter()
        .map(|&d| image_c.iter().map(|&x| tp.space.dist(d, x)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);

    let sd = sp.diagram(source.sigma, source.mu_grid, cfg)?;
    let td = tp.diagram(target_sigma, target.mu_grid, cfg)?;
    let (ss, se) = stable(&sd, cfg, "source")?;
    let (ts, te) = stable(&td, cfg, "target")?;
    let source_classes = sd.levels[se].partition.unbounded_ids();
    let target_classes = td.levels[te].partition.unbounded_ids();
    let deep_mu = td.levels[te].mu;
    let target_pairs = tp.space.proximity_pairs(target_sigma);

    let mut agreed: Option<BTreeMap<usize, usize>> = None;
    let mut levels = Vec::new();
    for k in ss..=se {
        let mu = sd.levels[k].mu;
        if mu < lambda * (epsilon + r) - EPS {
            continue;
        }
        let mu_t = (mu / lambda - epsilon - r).max(0.0);
        let part = tp.partition(ScalePair::new(target_sigma, mu_t)?, &target_pairs, cfg);
        let cell = format!("source (sigma {}, mu {mu}) -> target (sigma {target_sigma}, mu {mu_t})", source.sigma);
        let down = sd.composite(se, k);
        let mut level_map = BTreeMap::new();
        let mut merged = false;
        for &class in &source_classes {
            let comp = down[&class];
            let mut labels = BTreeSet::new();
            for p in sd.levels[k].partition.members(comp) {
                let q = f.images[p];
                match part.label(q) {
                    Some(l) => {
                        labels.insert(l);
                    }
                    None => {
                        return Err(Error::Consistency(format!(
                            "{cell}: image of component {comp} leaves the alive set"
                        )))
                    }
                }
            }
            if labels.len() != 1 {
                return Err(Error::Consistency(format!(
                    "{cell}: image of component {comp} meets {} target components",
                    labels.len()
                )));
            }
            let k_id = *labels.iter().next().unwrap();
            let t_class = if mu_t >= deep_mu - EPS {
                td.levels[te]
                    .partition
                    .label(k_id)
                    .filter(|l| target_classes.contains(l))
            } else {
                let hits: Vec<usize> = target_classes
                    .iter()
                    .copied()
                    .filter(|&c| part.label(c) == Some(k_id))
                    .collect();
                if hits.len() > 1 {
                    // this shallow level still merges target ends
                    merged = true;
                    break;
                }
                hits.first().copied()
            };
            let t_class = t_class.ok_or_else(|| {
                Error::Consistency(format!(
                    "{cell}: image of component {comp} does not single out a target end (target stable window starts at mu {})",
                    td.levels[ts].mu
                ))
            })?;
            level_map.insert(class, t_class);
        }
        if merged {
            continue;
        }
        if let Some(prev) = &agreed {
            if prev != &level_map {
                return Err(Error::Consistency(format!("{cell}: induced maps disagree across levels")));
            }
        }
        agreed = Some(level_map);
        levels.push(mu);
    }
    let map = agreed.ok_or_else(|| {
        Error::Inconclusive(format!(
            "no stable source level with mu >= lambda*(epsilon + r) = {} lands in separated target ends",
            lambda * (epsilon + r)
        ))
    })?;
    let image: BTreeSet<usize> = map.values().copied().collect();
    let bijective = image.len() == map.len() && image.iter().copied().eq(target_classes.iter().copied());
    Ok(InducedEndMap {
        lambda,
        epsilon,
        r,
        target_sigma,
        source_classes,
        target_classes,
        map,
        bijective,
        levels,
    })
}
