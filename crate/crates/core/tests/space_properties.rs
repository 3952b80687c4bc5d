use coarse_ends::ends::{EndsConfig, SpacePair};
use coarse_ends::group::{trace_subset, Ball, Element, Group, SubgroupSpec, SubsetSpec};
use coarse_ends::space::{
    alive_from_distances, sigma_components, transition_map, truncated_hausdorff, CoordMetric, FiniteSpace,
    ScalePair, UnboundedRule,
};
use proptest::prelude::*;

fn cloud() -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0f64..8.0, 2), 2..80)
}

fn coord_space(pts: Vec<Vec<f64>>, manhattan: bool) -> FiniteSpace {
    let metric = if manhattan { CoordMetric::Manhattan } else { CoordMetric::Euclidean };
    let d = |a: &[f64], b: &[f64]| -> f64 {
        if manhattan {
            a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
        } else {
            a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
        }
    };
    let radius = pts.iter().map(|p| d(&pts[0], p)).fold(0.0, f64::max);
    FiniteSpace::coords(pts, metric, 0, radius, 0.0).unwrap()
}

proptest! {
    #[test]
    fn alive_sets_shrink_with_mu(pts in cloud(), mu1 in 0.0f64..4.0, mu2 in 0.0f64..4.0) {
        let space = coord_space(pts, false);
        let d = space.distances_to_subset(&[0]).unwrap();
        let (lo, hi) = if mu1 <= mu2 { (mu1, mu2) } else { (mu2, mu1) };
        let (big, small) = (alive_from_distances(&d, lo), alive_from_distances(&d, hi));
        prop_assert!(small.iter().zip(&big).all(|(s, b)| !s || *b));
    }

    #[test]
    fn shared_label_iff_quasi_path(pts in cloud(), sigma in 0.2f64..3.0, manhattan in any::<bool>(), seed in any::<u64>()) {
        let space = coord_space(pts, manhattan);
        let n = space.len();
        let alive: Vec<bool> = (0..n).map(|i| (seed >> (i % 64)) & 1 == 1 || i % 3 == 0).collect();
        let part = sigma_components(&space, &alive, ScalePair::new(sigma, 0.0).unwrap(), &UnboundedRule::default());
        // transitive closure of the σ-step relation on alive points
        let mut reach = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                reach[i][j] = alive[i] && alive[j] && (i == j || space.dist(i, j) <= sigma + 1e-9);
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if reach[i][k] && reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        for i in (0..n).filter(|&i| alive[i]) {
            for j in (0..n).filter(|&j| alive[j]) {
                prop_assert_eq!(part.label(i) == part.label(j), reach[i][j]);
            }
        }
    }

    #[test]
    fn unbounded_flags_follow_the_rule(pts in cloud(), sigma in 0.2f64..3.0, margin in prop::option::of(0.0f64..2.0), depth in 0.0f64..0.6) {
        let space = coord_space(pts, false);
        let rule = UnboundedRule { margin, depth_fraction: depth };
        let alive = vec![true; space.len()];
        let part = sigma_components(&space, &alive, ScalePair::new(sigma, 0.0).unwrap(), &rule);
        let r = space.radius();
        for c in part.components() {
            let radii: Vec<f64> = part.members(c.id).iter().map(|&p| space.from_base(p)).collect();
            let hi = radii.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = radii.iter().cloned().fold(f64::INFINITY, f64::min);
            let expected = hi >= r - margin.unwrap_or(sigma) - 1e-9 && hi - lo >= depth * r - 1e-9;
            prop_assert_eq!(c.unbounded, expected);
        }
    }

    #[test]
    fn hausdorff_symmetric_and_triangular(pts in cloud(), seed in any::<u64>()) {
        let space = coord_space(pts, true);
        let n = space.len();
        let pick = |s: u64| -> Vec<usize> {
            let v: Vec<usize> = (0..n).filter(|&i| (s.rotate_left(i as u32 % 64) & 3) == 0).collect();
            if v.is_empty() { vec![(s as usize) % n] } else { v }
        };
        let (a, b, c) = (pick(seed), pick(seed.wrapping_mul(31)), pick(seed.wrapping_mul(77)));
        let ab = truncated_hausdorff(&space, &a, &b).unwrap();
        let ba = truncated_hausdorff(&space, &b, &a).unwrap();
        let bc = truncated_hausdorff(&space, &b, &c).unwrap();
        let ac = truncated_hausdorff(&space, &a, &c).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!(ac <= ab + bc + 1e-9);
    }

    #[test]
    fn left_translation_preserves_hausdorff(g in prop::collection::vec(-2i64..=2, 2), ha in 0i64..=2, hb in -2i64..=0) {
        let ball = Ball::build(&Group::free_abelian(2), 10).unwrap();
        let grp = ball.group().clone();
        let line = |h: i64| SubsetSpec::Coset {
            element: Element::Vector(vec![0, h]),
            subgroup: SubgroupSpec::Generated(vec![Element::Vector(vec![1, 0])]),
        };
        let space = FiniteSpace::cayley(ball).unwrap();
        let ball = space.ball().unwrap();
        // keep segments well inside so that translates stay in the ball
        let inner = |s: &SubsetSpec| -> Vec<usize> {
            trace_subset(ball, s).unwrap().into_iter().filter(|&p| space.from_base(p) <= 5.0).collect()
        };
        let (a, b) = (inner(&line(ha)), inner(&line(hb)));
        let g = Element::Vector(g);
        let shift = |s: &[usize]| -> Vec<usize> {
            s.iter().map(|&p| ball.index_of(&grp.multiply(&g, ball.point(p))).unwrap()).collect()
        };
        let before = truncated_hausdorff(&space, &a, &b).unwrap();
        let after = truncated_hausdorff(&space, &shift(&a), &shift(&b)).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn free_group_translation_isometry(w in prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2]), 0..=2)) {
        let ball = Ball::build(&Group::free(2), 8).unwrap();
        let grp = ball.group().clone();
        let g = w.iter().fold(grp.identity(), |acc, &l| grp.multiply(&acc, &Element::Word(vec![l])));
        let space = FiniteSpace::cayley(ball).unwrap();
        let ball = space.ball().unwrap();
        let a: Vec<usize> = trace_subset(ball, &SubsetSpec::Subgroup(SubgroupSpec::Generated(vec![Element::Word(vec![1])])))
            .unwrap()
            .into_iter()
            .filter(|&p| space.from_base(p) <= 4.0)
            .collect();
        let b: Vec<usize> = (0..ball.len()).filter(|&p| space.from_base(p) <= 1.0).collect();
        let shift = |s: &[usize]| -> Vec<usize> {
            s.iter().map(|&p| ball.index_of(&grp.multiply(&g, ball.point(p))).unwrap()).collect()
        };
        prop_assert_eq!(
            truncated_hausdorff(&space, &a, &b).unwrap(),
            truncated_hausdorff(&space, &shift(&a), &shift(&b)).unwrap()
        );
    }

    #[test]
    fn transition_maps_compose(s in prop::collection::vec(1.0f64..3.0, 3), m in prop::collection::vec(1.0f64..10.0, 3)) {
        let ball = Ball::build(&Group::free_abelian(2), 20).unwrap();
        let c = trace_subset(&ball, &SubsetSpec::Predicate("x-axis".into())).unwrap();
        let space = FiniteSpace::cayley(ball).unwrap();
        let pair = SpacePair::new(&space, &c).unwrap();
        let mut sig = s.clone();
        sig.sort_by(f64::total_cmp);
        let mut mus = m.clone();
        mus.sort_by(|a, b| b.total_cmp(a));
        let cfg = EndsConfig::default();
        let parts: Vec<_> = (0..3)
            .map(|k| pair.partition(ScalePair::new(sig[k], mus[k]).unwrap(), &space.proximity_pairs(sig[k]), &cfg))
            .collect();
        let ab = transition_map(&parts[0], &parts[1]).unwrap();
        let bc = transition_map(&parts[1], &parts[2]).unwrap();
        let ac = transition_map(&parts[0], &parts[2]).unwrap();
        for (k, v) in &ac {
            prop_assert_eq!(bc[&ab[k]], *v);
        }
        prop_assert!(transition_map(&parts[2], &parts[0]).is_err() || (sig[0] == sig[2] && mus[0] == mus[2]));
    }
}

#[test]
fn scale_order() {
    let a = ScalePair::new(1.0, 5.0).unwrap();
    let b = ScalePair::new(2.0, 3.0).unwrap();
    let c = ScalePair::new(2.0, 6.0).unwrap();
    assert!(a.precedes(&b) && !b.precedes(&a));
    assert!(!a.precedes(&c) && !c.precedes(&a));
    assert!(ScalePair::new(-1.0, 0.0).is_err());
}

#[test]
fn build_time_spot_check_rejects_non_metrics() {
    let n = 6;
    let mut t = vec![vec![1.0; n]; n];
    for (i, row) in t.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    t[1][2] = 5.0;
    t[2][1] = 5.0;
    assert!(FiniteSpace::table(t, 0, 10.0).is_err());
}
