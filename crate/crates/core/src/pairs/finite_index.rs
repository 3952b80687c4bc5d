use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::group::{trace_subset, Element, Group, Subgroup, SubgroupSpec, SubsetSpec};
use crate::pairs::cosets::enumerate_cosets;
use crate::space::{core_hausdorff, FiniteSpace};

/// One member `Q_i = g_i P_i g_i⁻¹ ∩ H` of the induced collection.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedSubgroup {
    /// Index of `P_i` in the input list.
    pub subgroup: usize,
    /// Ball index of the orbit representative `g_i`.
    pub rep: usize,
    pub q: SubgroupSpec,
    pub q_trace: Vec<usize>,
    /// `Hdist(Q_i, g_i P_i g_i⁻¹)`.
    pub d1: Option<f64>,
    /// `|g_i|`.
    pub d2: f64,
    /// Measured `Hdist(Q_i, g_i P_i)`; bounded by `d1 + d2`.
    pub witness: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteIndexCollection {
    pub index: u64,
    pub members: Vec<InducedSubgroup>,
}

fn generator_images(group: &Group, spec: &SubgroupSpec) -> Result<Vec<Element>> {
    match spec {
        SubgroupSpec::Trivial => Ok(Vec::new()),
        SubgroupSpec::Whole => Ok(group.generators().to_vec()),
        SubgroupSpec::Generated(gens) => Ok(gens.clone()),
        _ => Err(Error::config("orbit computation needs P given by generators")),
    }
}

/// Closure of `gens` in the finite quotient `G/H`.
fn quotient_span(h: &Subgroup, gens: &[Vec<i64>], zero: Vec<i64>) -> BTreeSet<Vec<i64>> {
    let mut span = BTreeSet::from([zero]);
    loop {
        let current: Vec<Vec<i64>> = span.iter().cloned().collect();
        let mut grew = false;
        for x in &current {
            for g in gens {
                grew |= span.insert(h.quotient_add(x, g));
            }
        }
        if !grew {
            return span;
        }
    }
}

/// Orbit representatives of the `H`-action on visible cosets of `P_list`,
/// with `Q_i = g_i P_i g_i⁻¹ ∩ H` and the measured distances bounding
/// `Hdist(hQ_i, hg_iP_i)`. `H` must be normal with a finite coset table.
pub fn induce_finite_index_collection(
    space: &FiniteSpace,
    h: &SubgroupSpec,
    p_list: &[SubgroupSpec],
) -> Result<FiniteIndexCollection> {
    let ball = space.ball().ok_or_else(|| Error::config("finite-index collections need a Cayley ball"))?;
    let group = ball.group();
    let hs = Subgroup::resolve(group, h)?;
    if !hs.has_coset_table() {
        return Err(Error::config("H has no finite coset table"));
    }
    let index = hs.finite_index().expect("coset table implies finite index");
    let quotient = |g: &Element| hs.quotient(g).expect("coset table gives a quotient map");
    let zero = quotient(&group.identity());
    let spans: Vec<BTreeSet<Vec<i64>>> = p_list
        .iter()
        .map(|p| {
            let gens: Vec<Vec<i64>> = generator_images(group, p)?.iter().map(quotient).collect();
            Ok(quotient_span(&hs, &gens, zero.clone()))
        })
        .collect::<Result<_>>()?;
    let family = enumerate_cosets(ball, p_list)?;
    let mut seen: BTreeMap<(usize, Vec<i64>), usize> = BTreeMap::new();
    let mut members = Vec::new();
    let core = space.radius() / 2.0;
    for coset in &family.cosets {
        let k = coset.subgroup;
        let pg = quotient(ball.point(coset.rep));
        let key = spans[k].iter().map(|s| hs.quotient_add(&pg, s)).min().expect("span contains zero");
        if seen.contains_key(&(k, key.clone())) {
            continue;
        }
        seen.insert((k, key), coset.rep);
        let g = ball.point(coset.rep).clone();
        let conj = SubgroupSpec::Conjugate { by: g.clone(), inner: Box::new(p_list[k].clone()) };
        let q = SubgroupSpec::Intersection(vec![conj.clone(), h.clone()]);
        let q_trace = trace_subset(ball, &SubsetSpec::Subgroup(q.clone()))?;
        let conj_trace = trace_subset(ball, &SubsetSpec::Subgroup(conj))?;
        let d1 = core_hausdorff(space, &q_trace, &conj_trace, core)?;
        let witness = core_hausdorff(space, &q_trace, &coset.trace, core)?;
        members.push(InducedSubgroup {
            subgroup: k,
            rep: coset.rep,
            q,
            q_trace,
            d1,
            d2: ball.length(coset.rep) as f64,
            witness,
        });
    }
    Ok(FiniteIndexCollection { index, members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Ball;

    fn v(x: &[i64]) -> Element {
        Element::Vector(x.to_vec())
    }

    #[test]
    fn even_columns() {
        let space = FiniteSpace::cayley(Ball::build(&Group::free_abelian(2), 10).unwrap()).unwrap();
        let h = SubgroupSpec::Generated(vec![v(&[2, 0]), v(&[0, 1])]);
        let p = SubgroupSpec::Generated(vec![v(&[1, 0])]);
        let c = induce_finite_index_collection(&space, &h, &[p]).unwrap();
        assert_eq!(c.index, 2);
        assert_eq!(c.members.len(), 1);
        let m = &c.members[0];
        assert_eq!(m.witness, Some(1.0));
        assert_eq!(m.d1, Some(1.0));
        let ball = space.ball().unwrap();
        assert!(m.q_trace.iter().all(|&i| matches!(ball.point(i), Element::Vector(x) if x[1] == 0 && x[0] % 2 == 0)));
    }

    #[test]
    fn whole_group() {
        let space = FiniteSpace::cayley(Ball::build(&Group::free_abelian(2), 6).unwrap()).unwrap();
        let p = SubgroupSpec::Generated(vec![v(&[1, 0])]);
        let c = induce_finite_index_collection(&space, &SubgroupSpec::Whole, &[p]).unwrap();
        assert_eq!(c.members.len(), 1);
        assert_eq!(c.members[0].witness, Some(0.0));
    }

    #[test]
    fn multiples_of_three() {
        let space = FiniteSpace::cayley(Ball::build(&Group::free_abelian(1), 9).unwrap()).unwrap();
        let h = SubgroupSpec::Generated(vec![v(&[3])]);
        let c = induce_finite_index_collection(&space, &h, &[SubgroupSpec::Trivial]).unwrap();
        assert_eq!(c.index, 3);
        assert_eq!(c.members.len(), 3);
        assert!(c.members.iter().all(|m| m.witness.unwrap() <= 1.0));
        assert!(c.members.iter().all(|m| m.witness.unwrap() <= m.d1.unwrap() + m.d2));
    }

    #[test]
    fn needs_coset_table() {
        let space = FiniteSpace::cayley(Ball::build(&Group::free_abelian(2), 4).unwrap()).unwrap();
        let h = SubgroupSpec::Generated(vec![v(&[1, 0])]);
        let err = induce_finite_index_collection(&space, &h, &[SubgroupSpec::Trivial]).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }
}
