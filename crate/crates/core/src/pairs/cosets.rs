use std::collections::HashMap;

use crate::error::Result;
use crate::group::{Ball, CosetKey, Subgroup, SubgroupSpec};

/// A left coset `gP` meeting the ball.
#[derive(Clone, Debug, PartialEq)]
pub struct VisibleCoset {
    /// Index of `P` in the subgroup list.
    pub subgroup: usize,
    /// Ball index of the canonical (first in ball order) representative.
    pub rep: usize,
    /// Ball indices of `gP ∩ ball`, sorted.
    pub trace: Vec<usize>,
}

/// The cosets of a subgroup list visible in a ball.
#[derive(Clone, Debug)]
pub struct PairFamily {
    pub subgroups: Vec<Subgroup>,
    pub cosets: Vec<VisibleCoset>,
}

impl PairFamily {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }
}

/// Enumerates visible cosets, deciding equality by normal forms: a canonical
/// coset key where one exists, else a membership test of `g⁻¹g'`.
pub fn enumerate_cosets(ball: &Ball, specs: &[SubgroupSpec]) -> Result<PairFamily> {
    let group = ball.group();
    let subgroups: Vec<Subgroup> = specs
        .iter()
        .map(|s| Subgroup::resolve(group, s))
        .collect::<Result<_>>()?;
    let mut cosets: Vec<VisibleCoset> = Vec::new();
    for (k, sub) in subgroups.iter().enumerate() {
        let first = cosets.len();
        let mut by_key: HashMap<CosetKey, usize> = HashMap::new();
        for i in 0..ball.len() {
            let p = ball.point(i);
            let found = match sub.coset_key(p) {
                Some(key) => by_key.get(&key).copied().or_else(|| {
                    by_key.insert(key, cosets.len());
                    None
                }),
                None => (first..cosets.len())
                    .find(|&c: &usize| sub.same_coset(ball.point(cosets[c].rep), p)),
            };
            match found {
                Some(c) => cosets[c].trace.push(i),
                None => cosets.push(VisibleCoset { subgroup: k, rep: i, trace: vec![i] }),
            }
        }
    }
    Ok(PairFamily { subgroups, cosets })
}
