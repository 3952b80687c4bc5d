use coarse_ends::ends::{classical_ends, filtered_ends, ray_witnesses, EndsConfig, SpacePair, Verdict};
use coarse_ends::group::{trace_subset, Ball, Group, SubsetSpec};
use coarse_ends::space::{FiniteSpace, EPS};
use proptest::prelude::*;

fn z2_axis(r: u32) -> (FiniteSpace, Vec<usize>) {
    let ball = Ball::build(&Group::free_abelian(2), r).unwrap();
    let c = trace_subset(&ball, &SubsetSpec::Predicate("x-axis".into())).unwrap();
    (FiniteSpace::cayley(ball).unwrap(), c)
}

fn mus(hi: u32) -> Vec<f64> {
    (1..=hi).map(f64::from).collect()
}

#[test]
fn unit_graph_scale_robustness() {
    let cfg = EndsConfig::default();
    let (space, c) = z2_axis(30);
    let rep = filtered_ends(&space, &c, &[1.0, 2.0, 3.0], &mus(15), &cfg).unwrap();
    assert!(rep.per_sigma.iter().all(|v| v.verdict == Verdict::Exact(2)));
    assert!(rep.cross.iter().all(|x| x.bijective));
    for group in [Group::free_abelian(1), Group::free_abelian(2)] {
        let space = FiniteSpace::cayley(Ball::build(&group, 30).unwrap()).unwrap();
        let rep = classical_ends(&space, &[1.0, 2.0, 3.0], &[], &cfg).unwrap();
        let first = rep.per_sigma[0].verdict;
        assert!(matches!(first, Verdict::Exact(_)));
        assert!(rep.per_sigma.iter().all(|v| v.verdict == first));
        assert!(rep.cross.iter().all(|x| x.bijective));
    }
}

#[test]
fn larger_radius_keeps_exact_verdicts() {
    let cfg = EndsConfig::default();
    let grid = mus(10);
    let mut seen = Vec::new();
    for r in [20, 26, 32] {
        let (space, c) = z2_axis(r);
        let rep = filtered_ends(&space, &c, &[1.0, 2.0], &grid, &cfg).unwrap();
        seen.push(rep.per_sigma.iter().map(|v| v.verdict).collect::<Vec<_>>());
    }
    assert!(seen.windows(2).all(|w| w[0] == w[1]), "{seen:?}");
}

#[test]
fn witnesses_stay_in_their_class() {
    let cfg = EndsConfig::default();
    let (space, c) = z2_axis(24);
    let pair = SpacePair::new(&space, &c).unwrap();
    for sigma in [1.0, 2.0] {
        let d = pair.diagram(sigma, &mus(12), &cfg).unwrap();
        let (start, end) = d.stable_window(cfg.window).unwrap();
        let ws = ray_witnesses(&pair, &d, &cfg).unwrap();
        assert_eq!(ws.len(), 2);
        for w in &ws {
            assert!(c.contains(&w.path[0]));
            assert!(w.path.windows(2).all(|p| space.dist(p[0], p[1]) <= sigma + EPS));
            for k in start..=end {
                let comp = d.composite(end, k)[&w.class];
                let level = &d.levels[k].partition;
                let inside: Vec<usize> = w.path.iter().copied().filter(|&p| level.is_alive(p)).collect();
                assert!(!inside.is_empty());
                assert!(inside.iter().all(|&p| level.label(p) == Some(comp)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn verdicts_follow_their_definition(
        grid in prop::collection::btree_set(1u32..=15, 1..10),
        sigma in prop::sample::select(vec![1.0, 2.0, 3.0]),
        window in 1usize..5,
        n_max in 1usize..4,
    ) {
        let (space, c) = z2_axis(30);
        let cfg = EndsConfig { window, n_max, ..EndsConfig::default() };
        let grid: Vec<f64> = grid.into_iter().map(f64::from).collect();
        let d = SpacePair::new(&space, &c).unwrap().diagram(sigma, &grid, &cfg).unwrap();
        let v = d.verdict(&cfg);
        let t = d.trusted_prefix();
        let counts: Vec<usize> = d.levels[..t].iter().map(|l| l.partition.unbounded_count()).collect();
        match v.verdict {
            Verdict::Exact(n) => {
                let (s, e) = d.final_run().unwrap();
                prop_assert!(e - s + 1 >= window);
                prop_assert!(counts[s..=e].iter().all(|&k| k == n));
                prop_assert!(d.levels[s + 1..=e].iter().all(|l| l.bijective));
                prop_assert!(counts.iter().all(|&k| k <= n_max));
            }
            Verdict::AtLeast(n) => {
                let over = counts.iter().any(|&k| k > n_max);
                let rising = t >= 2 && counts[t - 1] > counts[t - 2] && n == counts[t - 1];
                prop_assert!((over && n == n_max) || rising);
            }
            Verdict::Inconclusive => {}
        }
    }
}
