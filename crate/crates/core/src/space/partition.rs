use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::space::finite::{FiniteSpace, EPS};
use crate::space::union_find::UnionFind;

/// `(σ, μ)` with the order `(σ,μ) ⪯ (σ',μ')` iff `σ ≤ σ'` and `μ ≥ μ'`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalePair {
    pub sigma: f64,
    pub mu: f64,
}

impl ScalePair {
    pub fn new(sigma: f64, mu: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
        }
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::domain(format!("mu must be non-negative, got {mu}")));
        }
        Ok(ScalePair { sigma, mu })
    }

    pub fn precedes(&self, other: &ScalePair) -> bool {
        self.sigma <= other.sigma && self.mu >= other.mu
    }
}

/// How a component of a truncated space is judged unbounded.
///
/// A component counts as unbounded when it reaches the outer shell
/// (`max dist ≥ R − margin`) and spans at least `depth_fraction · R` radially.
/// The depth condition discards fragments that merely sit on the shell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnboundedRule {
    /// Defaults to σ when `None`.
    pub margin: Option<f64>,
    pub depth_fraction: f64,
}

impl Default for UnboundedRule {
    fn default() -> Self {
        UnboundedRule { margin: None, depth_fraction: 0.25 }
    }
}

impl UnboundedRule {
    fn is_unbounded(&self, radius: f64, sigma: f64, min_r: f64, max_r: f64) -> bool {
        let margin = self.margin.unwrap_or(sigma);
        max_r >= radius - margin - EPS && max_r - min_r >= self.depth_fraction * radius - EPS
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    /// Smallest member point.
    pub id: usize,
    pub size: usize,
    pub unbounded: bool,
    pub min_radius: f64,
    pub max_radius: f64,
}

/// σ-components of an alive set, labelled by their minimal point.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentPartition {
    pub scale: ScalePair,
    alive: Vec<bool>,
    labels: Vec<Option<usize>>,
    components: Vec<Component>,
}

impl ComponentPartition {
    pub fn alive(&self) -> &[bool] {
        &self.alive
    }

    pub fn is_alive(&self, p: usize) -> bool {
        self.alive[p]
    }

    pub fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    /// Component id of `p`, or `None` if `p` is not alive.
    pub fn label(&self, p: usize) -> Option<usize> {
        self.labels[p]
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, id: usize) -> Option<&Component> {
        self.components
            .binary_search_by_key(&id, |c| c.id)
            .ok()
            .map(|k| &self.components[k])
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn unbounded(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| c.unbounded)
    }

    pub fn unbounded_ids(&self) -> Vec<usize> {
        self.unbounded().map(|c| c.id).collect()
    }

    pub fn unbounded_count(&self) -> usize {
        self.unbounded().count()
    }

    /// Members of component `id`, in point order.
    pub fn members(&self, id: usize) -> Vec<usize> {
        (id..self.labels.len()).filter(|&p| self.labels[p] == Some(id)).collect()
    }
}

/// `{p : dist(p, C) ≥ μ}` from precomputed distances to `C`.
pub fn alive_from_distances(dist_to_c: &[f64], mu: f64) -> Vec<bool> {
    dist_to_c.iter().map(|&d| d >= mu - EPS).collect()
}

/// Complement of the open μ-neighbourhood of `C`.
pub fn complement_of_neighborhood(space: &FiniteSpace, c: &[usize], mu: f64) -> Result<Vec<usize>> {
    if !(mu >= 0.0) {
        return Err(Error::domain(format!("mu must be non-negative, got {mu}")));
    }
    if mu == 0.0 {
        return Ok((0..space.len()).collect());
    }
    let d = space.distances_to_subset(c)?;
    Ok((0..space.len()).filter(|&p| d[p] >= mu - EPS).collect())
}

pub fn sigma_components(
    space: &FiniteSpace,
    alive: &[bool],
    scale: ScalePair,
    rule: &UnboundedRule,
) -> ComponentPartition {
    let pairs = space.proximity_pairs(scale.sigma);
    sigma_components_with_pairs(space, alive, scale, &pairs, rule)
}

/// As [`sigma_components`], reusing precomputed σ-proximity pairs.
pub fn sigma_components_with_pairs(
    space: &FiniteSpace,
    alive: &[bool],
    scale: ScalePair,
    pairs: &[(usize, usize)],
    rule: &UnboundedRule,
) -> ComponentPartition {
    let n = space.len();
    let mut uf = UnionFind::new(n);
    for &(i, j) in pairs {
        if alive[i] && alive[j] {
            uf.union(i, j);
        }
    }
    let mut labels = vec![None; n];
    let mut stats: BTreeMap<usize, (usize, f64, f64)> = BTreeMap::new();
    for p in 0..n {
        if !alive[p] {
            continue;
        }
        let root = uf.find(p);
        labels[p] = Some(root);
        let r = space.from_base(p);
        let e = stats.entry(root).or_insert((0, f64::INFINITY, f64::NEG_INFINITY));
        e.0 += 1;
        e.1 = e.1.min(r);
        e.2 = e.2.max(r);
    }
    let components = stats
        .into_iter()
        .map(|(id, (size, lo, hi))| Component {
            id,
            size,
            unbounded: rule.is_unbounded(space.radius(), scale.sigma, lo, hi),
            min_radius: lo,
            max_radius: hi,
        })
        .collect();
    ComponentPartition {
        scale,
        alive: alive.to_vec(),
        labels,
        components,
    }
}

/// Sends each unbounded component of `from` to the component of `to`
/// containing it.
pub fn transition_map(
    from: &ComponentPartition,
    to: &ComponentPartition,
) -> Result<BTreeMap<usize, usize>> {
    if !from.scale.precedes(&to.scale) {
        return Err(Error::Order(format!(
            "({}, {}) does not precede ({}, {})",
            from.scale.sigma, from.scale.mu, to.scale.sigma, to.scale.mu
        )));
    }
    let mut out = BTreeMap::new();
    for c in from.unbounded() {
        let target = to.label(c.id).ok_or_else(|| {
            Error::Consistency(format!("point {} is alive at the source but not the target", c.id))
        })?;
        out.insert(c.id, target);
    }
    Ok(out)
}

/// Whether a component map is a bijection onto the unbounded components of
/// `to`.
pub fn is_bijection(map: &BTreeMap<usize, usize>, to: &ComponentPartition) -> bool {
    let mut image: Vec<usize> = map.values().copied().collect();
    image.sort_unstable();
    image.dedup();
    image.len() == map.len() && image == to.unbounded_ids()
}
