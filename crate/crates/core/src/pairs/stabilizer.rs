use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pairs::qi::QIMapSample;
use crate::space::{directed_hausdorff, FiniteSpace, EPS};

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerResult {
    /// Ball indices `g` with `Hdist(q_g(A), A) ≤ M`.
    pub members: Vec<usize>,
    /// Ball indices whose trusted region was empty.
    pub inconclusive: Vec<usize>,
    /// Measured distance per ball index (`None` when inconclusive).
    pub values: Vec<Option<f64>>,
}

/// `{g : Hdist(q_g(A), A) ≤ M}` with `q_g = q ∘ g ∘ q̄`.
///
/// `q` maps the group ball (`group`) to `x`. For each `g`, `A` is cut down to
/// the points within `R − (L|g| + C) − δ` of the basepoint, `δ` being the
/// displacement of `q ∘ q̄`, so that every translate stays visible; the
/// return direction is measured from the points within `R − 2(L|g| + C) − δ`.
pub fn approx_stabilizer(
    q: &QIMapSample,
    group: &FiniteSpace,
    x: &FiniteSpace,
    a: &[usize],
    m: f64,
) -> Result<StabilizerResult> {
    let ball = group
        .ball()
        .ok_or_else(|| Error::config("stabilizer queries need a Cayley ball as the group side"))?;
    if a.is_empty() {
        return Err(Error::domain("subset A is empty"));
    }
    q.map.check(group, x)?;
    let displacement = (0..x.len())
        .map(|y| x.dist(q.map.images[q.inverse.images[y]], y))
        .fold(0.0, f64::max);
    let (l, c) = (q.distortion.l, q.distortion.c);
    let g_group = ball.group();
    let values: Vec<Option<f64>> = (0..ball.len())
        .into_par_iter()
        .map(|gi| {
            let shift = l * ball.length(gi) as f64 + c;
            let forward_r = x.radius() - shift - displacement;
            let back_r = x.radius() - 2.0 * shift - displacement;
            let g = ball.point(gi);
            let image: Vec<usize> = a
                .iter()
                .filter(|&&p| x.from_base(p) <= forward_r + EPS)
                .filter_map(|&p| {
                    let y = ball.point(q.inverse.images[p]);
                    ball.index_of(&g_group.multiply(g, y)).map(|z| q.map.images[z])
                })
                .collect();
            if image.is_empty() {
                return None;
            }
            let back: Vec<usize> = a.iter().copied().filter(|&p| x.from_base(p) <= back_r + EPS).collect();
            Some(directed_hausdorff(x, &image, a).max(directed_hausdorff(x, &back, &image)))
        })
        .collect();
    if values.iter().all(Option::is_none) {
        return Err(Error::Inconclusive("trusted region is empty for every g".into()));
    }
    let members = (0..values.len()).filter(|&i| values[i].is_some_and(|h| h <= m + EPS)).collect();
    let inconclusive = (0..values.len()).filter(|&i| values[i].is_none()).collect();
    Ok(StabilizerResult { members, inconclusive, values })
}
