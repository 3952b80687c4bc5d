use rayon::prelude::*;

use crate::ends::diagram::{filtered_ends, FilteredEndsReport};
use crate::ends::verdict::{default_mu_grid, trusted, EndsConfig, Verdict};
use crate::error::Result;
use crate::space::{sigma_components, FiniteSpace, ScalePair};

/// Unbounded σ-components of the whole space (nothing removed).
#[derive(Clone, Debug, PartialEq)]
pub struct CensusRow {
    pub sigma: f64,
    pub components: usize,
    pub unbounded: usize,
    pub trusted: bool,
    pub verdict: Verdict,
}

/// Counts unbounded σ-components of the whole space for each σ; counts above
/// the cap are reported as `at_least(N_max)`.
pub fn unbounded_census(space: &FiniteSpace, sigma_grid: &[f64], cfg: &EndsConfig) -> Result<Vec<CensusRow>> {
    let alive = vec![true; space.len()];
    sigma_grid
        .par_iter()
        .map(|&sigma| {
            let scale = ScalePair::new(sigma, 0.0)?;
            let p = sigma_components(space, &alive, scale, &cfg.rule);
            let n = p.unbounded_count();
            let verdict = if n > cfg.n_max { Verdict::AtLeast(cfg.n_max) } else { Verdict::Exact(n) };
            Ok(CensusRow {
                sigma,
                components: p.component_count(),
                unbounded: n,
                trusted: trusted(sigma, 0.0, space.radius(), space.unit()),
                verdict,
            })
        })
        .collect()
}

/// Ends of the space itself: filtered ends relative to the basepoint.
/// Empty grids fall back to `σ = unit` (or 1) and the default μ grid.
pub fn classical_ends(
    space: &FiniteSpace,
    sigma_grid: &[f64],
    mu_grid: &[f64],
    cfg: &EndsConfig,
) -> Result<FilteredEndsReport> {
    let sigmas = if sigma_grid.is_empty() {
        vec![if space.unit() > 0.0 { space.unit() } else { 1.0 }]
    } else {
        sigma_grid.to_vec()
    };
    let mus = if mu_grid.is_empty() {
        default_mu_grid(space.radius(), space.unit(), space.is_graph_metric())
    } else {
        mu_grid.to_vec()
    };
    filtered_ends(space, &[space.basepoint()], &sigmas, &mus, cfg)
}
