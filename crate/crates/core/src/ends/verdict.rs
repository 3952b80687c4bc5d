use std::fmt;

use crate::space::{UnboundedRule, EPS};

/// Outcome of a finite-scale end count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Stabilized count; `Exact(0)` is rendered as `empty`.
    Exact(usize),
    /// Still growing, or above the component cap.
    AtLeast(usize),
    Inconclusive,
}

impl Verdict {
    pub fn count(&self) -> Option<usize> {
        match self {
            Verdict::Exact(n) | Verdict::AtLeast(n) => Some(*n),
            Verdict::Inconclusive => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Exact(0) => write!(f, "empty"),
            Verdict::Exact(n) => write!(f, "exact({n})"),
            Verdict::AtLeast(n) => write!(f, "at_least({n})"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Knobs shared by all end computations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EndsConfig {
    /// Consecutive stable trusted levels required for an exact verdict.
    pub window: usize,
    /// Component cap above which counts are reported as `at_least`.
    pub n_max: usize,
    pub rule: UnboundedRule,
}

impl Default for EndsConfig {
    fn default() -> Self {
        EndsConfig {
            window: 3,
            n_max: 64,
            rule: UnboundedRule::default(),
        }
    }
}

/// Whether `(σ, μ)` lies in the trust window of a space of radius `R`:
/// `μ ≤ R/2` and `σ ≤ max(R/10, unit)`.
pub fn trusted(sigma: f64, mu: f64, radius: f64, unit: f64) -> bool {
    mu <= radius / 2.0 + EPS && sigma <= (radius / 10.0).max(unit) + EPS
}

/// Default μ grid: integers `1..=⌊R/2⌋` for graph metrics, multiples of the
/// sampling step otherwise.
pub fn default_mu_grid(radius: f64, unit: f64, graph: bool) -> Vec<f64> {
    let step = if graph || unit <= 0.0 { 1.0 } else { unit };
    let n = ((radius / 2.0) / step + EPS).floor() as usize;
    (1..=n).map(|k| k as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        assert_eq!(Verdict::Exact(0).to_string(), "empty");
        assert_eq!(Verdict::Exact(2).to_string(), "exact(2)");
        assert_eq!(Verdict::AtLeast(64).to_string(), "at_least(64)");
        assert_eq!(Verdict::Inconclusive.to_string(), "inconclusive");
    }

    #[test]
    fn trust_window() {
        assert!(trusted(3.0, 15.0, 30.0, 1.0));
        assert!(!trusted(3.0, 16.0, 30.0, 1.0));
        assert!(!trusted(4.0, 1.0, 30.0, 1.0));
        assert!(trusted(1.0, 4.0, 9.0, 1.0));
    }

    #[test]
    fn mu_grids() {
        assert_eq!(default_mu_grid(9.0, 1.0, true), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(default_mu_grid(2.0, 0.25, false), vec![0.25, 0.5, 0.75, 1.0]);
    }
}
