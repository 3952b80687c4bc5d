use crate::error::{Error, Result};
use crate::space::finite::{FiniteSpace, EPS};

/// `sup_{a ∈ A} dist(a, B)`.
pub fn directed_hausdorff(space: &FiniteSpace, a: &[usize], b: &[usize]) -> f64 {
    a.iter()
        .map(|&p| b.iter().map(|&q| space.dist(p, q)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Hausdorff distance between the truncated sets `A` and `B`.
pub fn truncated_hausdorff(space: &FiniteSpace, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("Hausdorff distance of an empty set"));
    }
    Ok(directed_hausdorff(space, a, b).max(directed_hausdorff(space, b, a)))
}

/// Hausdorff distance measured from the cores of `A` and `B` (points within
/// `core_radius` of the basepoint) against the full traces of the other set.
///
/// Points near the truncation shell can lose their nearest partner to the
/// truncation; measuring only from the core removes that artefact. Returns
/// `None` when both cores are empty.
pub fn core_hausdorff(
    space: &FiniteSpace,
    a: &[usize],
    b: &[usize],
    core_radius: f64,
) -> Result<Option<f64>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("Hausdorff distance of an empty set"));
    }
    let core = |s: &[usize]| -> Vec<usize> {
        s.iter().copied().filter(|&p| space.from_base(p) <= core_radius + EPS).collect()
    };
    let (ca, cb) = (core(a), core(b));
    if ca.is_empty() && cb.is_empty() {
        return Ok(None);
    }
    Ok(Some(directed_hausdorff(space, &ca, b).max(directed_hausdorff(space, &cb, a))))
}
