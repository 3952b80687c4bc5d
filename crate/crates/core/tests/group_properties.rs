use coarse_ends::group::{trace_subset, Ball, Element, Group, SubgroupSpec, SubsetSpec};
use proptest::prelude::*;

fn word(rank: i32, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec((1..=rank, any::<bool>()).prop_map(|(l, inv)| if inv { -l } else { l }), 0..=max_len)
}

/// Free reduction written out independently of the library.
fn reduce(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn free_element(g: &Group, w: &[i32]) -> Element {
    w.iter().fold(g.identity(), |acc, &l| g.multiply(&acc, &Element::Word(vec![l])))
}

fn vector(rank: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-20i64..=20, rank)
}

fn mixed_product() -> Group {
    Group::direct_product(vec![Group::free_abelian(1), Group::free(2)])
}

fn mixed_element() -> impl Strategy<Value = Element> {
    (vector(1), word(2, 8)).prop_map(|(v, w)| {
        let f = Group::free(2);
        Element::Tuple(vec![Element::Vector(v), free_element(&f, &w)])
    })
}

fn free_product() -> Group {
    Group::free_product(vec![Group::free_abelian(1), Group::free(1)])
}

fn free_product_element() -> impl Strategy<Value = Element> {
    prop::collection::vec((0usize..2, -3i64..=3), 0..8).prop_map(|syls| {
        let g = free_product();
        syls.into_iter().fold(g.identity(), |acc, (i, k)| {
            let part = if i == 0 {
                Element::Vector(vec![k])
            } else {
                Element::Word(reduce(&vec![if k < 0 { -1 } else { 1 }; k.unsigned_abs() as usize]))
            };
            if k == 0 {
                acc
            } else {
                g.multiply(&acc, &Element::Syllables(vec![(i, part)]))
            }
        })
    })
}

proptest! {
    #[test]
    fn free_group_axioms(a in word(3, 10), b in word(3, 10)) {
        let g = Group::free(3);
        let (x, y) = (free_element(&g, &a), free_element(&g, &b));
        prop_assert_eq!(g.multiply(&g.identity(), &x), x.clone());
        prop_assert!(g.is_identity(&g.multiply(&x, &g.invert(&x))));
        // normal forms are injective: equal keys iff equal group elements
        prop_assert_eq!(x == y, reduce(&[a.clone(), b.iter().rev().map(|l| -l).collect()].concat()).is_empty());
        prop_assert_eq!(x, Element::Word(reduce(&a)));
    }

    #[test]
    fn free_abelian_axioms(a in vector(3), b in vector(3)) {
        let g = Group::free_abelian(3);
        let (x, y) = (Element::Vector(a.clone()), Element::Vector(b.clone()));
        prop_assert_eq!(g.multiply(&g.identity(), &x), x.clone());
        prop_assert!(g.is_identity(&g.multiply(&x, &g.invert(&x))));
        let sum: Vec<i64> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
        prop_assert_eq!(g.multiply(&x, &y), Element::Vector(sum));
    }

    #[test]
    fn direct_product_axioms(x in mixed_element(), y in mixed_element(), z in mixed_element()) {
        let g = mixed_product();
        prop_assert!(g.is_identity(&g.multiply(&x, &g.invert(&x))));
        prop_assert_eq!(g.multiply(&g.multiply(&x, &y), &z), g.multiply(&x, &g.multiply(&y, &z)));
    }

    #[test]
    fn free_product_normal_forms(x in free_product_element(), y in free_product_element()) {
        let g = free_product();
        prop_assert!(g.is_identity(&g.multiply(&x, &g.invert(&x))));
        prop_assert_eq!(g.multiply(&g.identity(), &x), x.clone());
        let xy = g.multiply(&x, &y);
        if let Element::Syllables(s) = &xy {
            prop_assert!(s.windows(2).all(|w| w[0].0 != w[1].0));
            prop_assert!(s.iter().all(|(i, e)| ![Group::free_abelian(1), Group::free(1)][*i].is_identity(e)));
        } else {
            prop_assert!(false, "free product element without syllables");
        }
        prop_assert_eq!(g.multiply(&xy, &g.invert(&y)), x);
    }

    #[test]
    fn custom_generators_are_symmetric(extra in prop::collection::vec(vector(2), 0..4)) {
        let mut gens = vec![vec![1, 0], vec![0, 1]];
        gens.extend(extra.into_iter().filter(|v| v.iter().any(|&x| x != 0)));
        let g = Group::free_abelian_with_generators(2, &gens).unwrap();
        for s in g.generators() {
            prop_assert!(g.generators().contains(&g.invert(s)));
        }
    }

    #[test]
    fn z_n_distance_is_l1(r in 1u32..=6, rank in 1usize..=3, seed in any::<u64>()) {
        let ball = Ball::build(&Group::free_abelian(rank), r).unwrap();
        let n = ball.len();
        let (i, j) = ((seed % n as u64) as usize, ((seed >> 32) % n as u64) as usize);
        let (Element::Vector(a), Element::Vector(b)) = (ball.point(i), ball.point(j)) else { unreachable!() };
        let l1: i64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
        prop_assert_eq!(ball.distance(i, j).value, l1 as u64);
        prop_assert!(ball.distance(i, j).exact);
    }

    #[test]
    fn free_length_is_reduced_length(w in word(2, 6)) {
        let ball = Ball::build(&Group::free(2), 6).unwrap();
        let g = ball.group();
        let x = free_element(g, &w);
        let d = ball.word_distance(&g.identity(), &x).unwrap();
        prop_assert_eq!(d.value, reduce(&w).len() as u64);
    }

    #[test]
    fn traces_closed_under_generators(a in vector(2), r in 2u32..=7) {
        prop_assume!(a.iter().any(|&x| x != 0));
        let ball = Ball::build(&Group::free_abelian(2), r).unwrap();
        let g = ball.group();
        let gens = vec![Element::Vector(a)];
        let trace = trace_subset(&ball, &SubsetSpec::Subgroup(SubgroupSpec::Generated(gens.clone()))).unwrap();
        prop_assert!(trace.contains(&0));
        for &p in &trace {
            for s in gens.iter().flat_map(|s| [s.clone(), g.invert(s)]) {
                if let Some(q) = ball.index_of(&g.multiply(&s, ball.point(p))) {
                    prop_assert!(trace.contains(&q));
                }
            }
        }
    }

    #[test]
    fn free_traces_closed(w in word(2, 3), r in 2u32..=6) {
        let ball = Ball::build(&Group::free(2), r).unwrap();
        let g = ball.group();
        let s = free_element(g, &w);
        prop_assume!(!g.is_identity(&s));
        let trace = trace_subset(&ball, &SubsetSpec::Subgroup(SubgroupSpec::Generated(vec![s.clone()]))).unwrap();
        prop_assert!(trace.contains(&0));
        for &p in &trace {
            for t in [s.clone(), g.invert(&s)] {
                if let Some(q) = ball.index_of(&g.multiply(&t, ball.point(p))) {
                    prop_assert!(trace.contains(&q));
                }
            }
        }
    }
}

#[test]
fn layer_sizes_match_closed_forms() {
    let z2 = Ball::build(&Group::free_abelian(2), 8).unwrap();
    let f2 = Ball::build(&Group::free(2), 8).unwrap();
    for k in 0..=8usize {
        let z = if k == 0 { 1 } else { 4 * k };
        let f = if k == 0 { 1 } else { 4 * 3usize.pow(k as u32 - 1) };
        assert_eq!(z2.layer_sizes()[k], z);
        assert_eq!(f2.layer_sizes()[k], f);
    }
}

#[test]
fn ball_order_is_canonical() {
    for group in [Group::free_abelian(2), Group::free(2), mixed_product(), free_product()] {
        let ball = Ball::build(&group, 4).unwrap();
        for i in 1..ball.len() {
            let a = (ball.length(i - 1), ball.point(i - 1));
            let b = (ball.length(i), ball.point(i));
            assert!(a < b, "{:?} before {:?}", a, b);
            assert!(ball.length(i) <= 4);
        }
    }
}
