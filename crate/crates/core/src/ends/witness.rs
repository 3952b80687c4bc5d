use std::collections::{BTreeMap, VecDeque};

use crate::ends::diagram::{EndsDiagram, SpacePair};
use crate::ends::verdict::EndsConfig;
use crate::error::{Error, Result};
use crate::space::EPS;

/// Finite prefix of a proper σ-ray: a σ-path from a point of `C` to the
/// outer shell, staying in one end class.
#[derive(Clone, Debug, PartialEq)]
pub struct RayWitness {
    /// Component id of the class at the deepest stable level.
    pub class: usize,
    pub path: Vec<usize>,
}

/// Class components per stable level, keyed by the deepest-level id.
fn class_chains(diagram: &EndsDiagram, start: usize, end: usize) -> BTreeMap<usize, Vec<usize>> {
    let mut chains: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in start..=end {
        for (class, comp) in diagram.composite(end, k) {
            chains.entry(class).or_default().push(comp);
        }
    }
    chains
}

/// One witness per stable end class of `diagram`.
pub fn ray_witnesses(pair: &SpacePair, diagram: &EndsDiagram, cfg: &EndsConfig) -> Result<Vec<RayWitness>> {
    let (start, end) = diagram
        .stable_window(cfg.window)
        .ok_or_else(|| Error::Inconclusive("no stabilized level to build witnesses from".into()))?;
    let space = pair.space;
    let n = space.len();
    let mut adjacency = vec![Vec::new(); n];
    for (i, j) in space.proximity_pairs(diagram.sigma) {
        adjacency[i].push(j);
        adjacency[j].push(i);
    }
    let deepest = &diagram.levels[end].partition;
    let mut out = Vec::new();
    for (class, chain) in class_chains(diagram, start, end) {
        let allowed = |p: usize| {
            (start..=end).zip(&chain).all(|(k, &comp)| {
                let part = &diagram.levels[k].partition;
                !part.is_alive(p) || part.label(p) == Some(comp)
            })
        };
        let target = deepest
            .members(class)
            .into_iter()
            .fold(None::<usize>, |best, p| match best {
                Some(b) if space.from_base(b) >= space.from_base(p) - EPS => Some(b),
                _ => Some(p),
            })
            .expect("components are non-empty");
        let mut prev = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for &c in &pair.subset {
            if allowed(c) && !seen[c] {
                seen[c] = true;
                queue.push_back(c);
            }
        }
        while let Some(v) = queue.pop_front() {
            if v == target {
                break;
            }
            for &u in &adjacency[v] {
                if !seen[u] && allowed(u) {
                    seen[u] = true;
                    prev[u] = v;
                    queue.push_back(u);
                }
            }
        }
        if !seen[target] {
            return Err(Error::Inconclusive(format!(
                "no sigma-path from C reaches end class {class} inside its components"
            )));
        }
        let mut path = vec![target];
        while prev[*path.last().unwrap()] != usize::MAX {
            path.push(prev[*path.last().unwrap()]);
        }
        path.reverse();
        out.push(RayWitness { class, path });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{trace_subset, Ball, Element, Group, SubsetSpec};
    use crate::space::FiniteSpace;

    #[test]
    fn half_plane_witnesses_are_vertical() {
        let ball = Ball::build(&Group::free_abelian(2), 20).unwrap();
        let c = trace_subset(&ball, &SubsetSpec::Predicate("x-axis".into())).unwrap();
        let space = FiniteSpace::cayley(ball).unwrap();
        let pair = SpacePair::new(&space, &c).unwrap();
        let mus: Vec<f64> = (1..=10).map(f64::from).collect();
        let cfg = EndsConfig::default();
        let d = pair.diagram(1.0, &mus, &cfg).unwrap();
        let ws = ray_witnesses(&pair, &d, &cfg).unwrap();
        assert_eq!(ws.len(), 2);
        let ball = space.ball().unwrap();
        let mut signs = Vec::new();
        for w in &ws {
            let ys: Vec<i64> = w
                .path
                .iter()
                .map(|&p| match ball.point(p) {
                    Element::Vector(v) => v[1],
                    _ => unreachable!(),
                })
                .collect();
            assert_eq!(ys[0], 0);
            assert!(ys.windows(2).all(|s| s[1].abs() == s[0].abs() + 1));
            signs.push(ys.last().unwrap().signum());
            assert!(w.path.windows(2).all(|s| space.dist(s[0], s[1]) <= 1.0));
        }
        signs.sort();
        assert_eq!(signs, vec![-1, 1]);
    }

    #[test]
    fn needs_a_stable_window() {
        let ball = Ball::build(&Group::free_abelian(2), 10).unwrap();
        let space = FiniteSpace::cayley(ball).unwrap();
        let pair = SpacePair::new(&space, &[0]).unwrap();
        let cfg = EndsConfig::default();
        let d = pair.diagram(1.0, &[1.0, 2.0], &cfg).unwrap();
        assert!(matches!(ray_witnesses(&pair, &d, &cfg), Err(Error::Inconclusive(_))));
    }
}
