//! Acceptance criteria, one line per criterion. Exits non-zero if any fails.

use std::collections::{BTreeMap, VecDeque};
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use coarse_ends::ends::{EndsConfig, SpacePair};
use coarse_ends::experiment::{build_space, catalog, catalog_entry, resolve_subset, run, run_default, Command, RunOptions};
use coarse_ends::group::{Ball, Element, Group, SubgroupSpec, SubsetSpec, trace_subset};
use coarse_ends::pairs::{approx_stabilizer, CommensuratorProbe, CommensuratorVerdict, QIMapSample};
use coarse_ends::space::{sigma_components, transition_map, CoordMetric, FiniteSpace, PointMap, ScalePair, UnboundedRule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn per_sigma(summary: &Value) -> Vec<String> {
    summary["per_sigma"]
        .as_array()
        .map(|a| a.iter().map(|s| s["verdict"].as_str().unwrap_or("").to_string()).collect())
        .unwrap_or_default()
}

fn run_entry(id: &str) -> Result<(Value, Duration), String> {
    let d = catalog_entry(id).and_then(|e| e.description()).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let r = run_default(&d, &RunOptions::default()).map_err(|e| e.to_string())?;
    Ok((r.summary, t.elapsed()))
}

fn z2_axis() -> Outcome {
    let (coarse, t1) = run_entry("z2-axis")?;
    let (fine, t2) = run_entry("z2-axis-fine")?;
    let got = [per_sigma(&coarse), per_sigma(&fine)].concat();
    check(got == ["exact(2)", "exact(2)", "exact(2)", "empty"], || format!("verdicts {got:?}"))?;
    let t = t1 + t2;
    check(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("sigma 1,2,3 -> {:?}, sigma 0.5 -> {:?} in {t:.2?}", &got[..3], got[3]))
}

fn hash_lines() -> Outcome {
    let (s, t) = run_entry("hash-lines")?;
    let got = per_sigma(&s);
    check(got == ["exact(8)", "exact(6)", "exact(4)"], || format!("verdicts {got:?}"))?;
    check(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!("{got:?} in {t:.2?}"))
}

fn plane_strip() -> Outcome {
    let (s, _) = run_entry("plane-line")?;
    let got = per_sigma(&s);
    check(got.len() == 3 && got.iter().all(|v| v == "exact(2)"), || format!("verdicts {got:?}"))?;
    Ok(format!("sigma 0.25, 0.5, 1 (step 0.25) -> {got:?}"))
}

fn product_row() -> Outcome {
    let (s, _) = run_entry("product-row")?;
    let got: Vec<&str> = s["census"].as_array().unwrap().iter().map(|c| c["verdict"].as_str().unwrap()).collect();
    check(got == ["exact(1)", "at_least(64)", "exact(1)"], || format!("verdicts {got:?}"))?;
    Ok(format!("sigma 0.5, 2, 3 -> {got:?}"))
}

fn classical() -> Outcome {
    let mut total = Duration::ZERO;
    let mut got = Vec::new();
    for id in ["z-basepoint", "z2-basepoint", "free2-basepoint"] {
        let (s, t) = run_entry(id)?;
        total += t;
        got.push(s["final_verdict"].as_str().unwrap().to_string());
    }
    check(got == ["exact(2)", "exact(1)", "at_least(64)"], || format!("verdicts {got:?}"))?;
    check(total < Duration::from_secs(60), || format!("took {total:?}"))?;
    Ok(format!("Z, Z^2, F2 -> {got:?} in {total:.2?}"))
}

fn two_gensets() -> Outcome {
    let (s, _) = run_entry("z2-two-gensets")?;
    let (a, b) = (s["final_verdict"].as_str().unwrap(), s["target_final_verdict"].as_str().unwrap());
    check(a == b && a == "exact(2)", || format!("verdicts {a} vs {b}"))?;
    check(per_sigma(&s) == per_sigma(&s["target"]), || "per-sigma verdicts differ".into())?;
    let induced = s["induced"].as_array().unwrap();
    check(!induced.is_empty() && induced.iter().all(|m| m["bijective"] == true), || format!("induced {induced:?}"))?;
    Ok(format!("both {a}; induced maps bijective at {} sigma values", induced.len()))
}

/// Components of the proximity graph found by plain breadth-first search.
fn bfs_labels(n: usize, alive: &[bool], close: impl Fn(usize, usize) -> bool) -> Vec<Option<usize>> {
    let mut label = vec![None; n];
    for s in 0..n {
        if !alive[s] || label[s].is_some() {
            continue;
        }
        label[s] = Some(s);
        let mut queue = VecDeque::from([s]);
        while let Some(p) = queue.pop_front() {
            for q in 0..n {
                if alive[q] && label[q].is_none() && close(p, q) {
                    label[q] = Some(s);
                    queue.push_back(q);
                }
            }
        }
    }
    label
}

fn oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rule = UnboundedRule::default();
    let mut mismatches = 0;
    let mut largest = 0;
    for trial in 0..200 {
        let (space, close): (FiniteSpace, Box<dyn Fn(usize, usize) -> bool>);
        let sigma: f64;
        if trial % 2 == 0 {
            let n = rng.gen_range(2..=500);
            let manhattan = rng.gen_bool(0.5);
            let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)]).collect();
            sigma = rng.gen_range(0.05..1.5);
            let d = move |a: [f64; 2], b: [f64; 2]| {
                if manhattan {
                    (a[0] - b[0]).abs() + (a[1] - b[1]).abs()
                } else {
                    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
                }
            };
            let radius = pts.iter().map(|&p| d(pts[0], p)).fold(0.0, f64::max);
            let metric = if manhattan { CoordMetric::Manhattan } else { CoordMetric::Euclidean };
            space = FiniteSpace::coords(pts.iter().map(|p| p.to_vec()).collect(), metric, 0, radius, 0.0)
                .map_err(|e| e.to_string())?;
            close = Box::new(move |i, j| d(pts[i], pts[j]) <= sigma + 1e-9);
        } else {
            let r = rng.gen_range(1..=15);
            let ball = Ball::build(&Group::free_abelian(2), r).map_err(|e| e.to_string())?;
            let pts: Vec<(i64, i64)> = ball
                .points()
                .iter()
                .map(|e| match e {
                    Element::Vector(v) => (v[0], v[1]),
                    _ => unreachable!(),
                })
                .collect();
            sigma = rng.gen_range(0.5..4.0);
            space = FiniteSpace::cayley(ball).map_err(|e| e.to_string())?;
            close = Box::new(move |i, j| {
                ((pts[i].0 - pts[j].0).abs() + (pts[i].1 - pts[j].1).abs()) as f64 <= sigma + 1e-9
            });
        }
        let n = space.len();
        largest = largest.max(n);
        let keep = rng.gen_range(0.3..1.0);
        let alive: Vec<bool> = (0..n).map(|_| rng.gen_bool(keep)).collect();
        let part = sigma_components(&space, &alive, ScalePair::new(sigma, 0.0).unwrap(), &rule);
        let expected = bfs_labels(n, &alive, close);
        if (0..n).any(|p| part.label(p) != expected[p]) {
            mismatches += 1;
        }
    }
    check(mismatches == 0, || format!("{mismatches} mismatching spaces"))?;
    Ok(format!("200 spaces (up to {largest} points), 0 mismatches"))
}

fn functoriality() -> Outcome {
    let grids: [(&str, [f64; 5], [f64; 5]); 3] = [
        ("z2-axis", [1.0, 1.5, 2.0, 2.5, 3.0], [1.0, 3.0, 5.0, 7.0, 9.0]),
        ("hash-lines", [0.5, 1.0, 1.5, 2.0, 2.5], [3.0, 6.0, 9.0, 12.0, 15.0]),
        ("plane-line", [0.25, 0.5, 0.75, 1.0, 1.25], [1.0, 2.0, 3.0, 4.0, 5.0]),
    ];
    let cfg = EndsConfig::default();
    let (mut triples, mut violations) = (0usize, 0usize);
    for (id, sigmas, mus) in grids {
        let d = catalog_entry(id).and_then(|e| e.description()).map_err(|e| e.to_string())?;
        let space = build_space(&d.space, usize::MAX).map_err(|e| e.to_string())?;
        let c = resolve_subset(&space, d.subset.as_ref().unwrap(), None).map_err(|e| e.to_string())?;
        let pair = SpacePair::new(&space, &c).map_err(|e| e.to_string())?;
        let mut cells = Vec::new();
        for &s in &sigmas {
            let pairs = space.proximity_pairs(s);
            for &m in &mus {
                let scale = ScalePair::new(s, m).unwrap();
                cells.push((scale, pair.partition(scale, &pairs, &cfg)));
            }
        }
        let n = cells.len();
        let mut maps = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                if cells[a].0.precedes(&cells[b].0) {
                    maps.insert((a, b), transition_map(&cells[a].1, &cells[b].1).map_err(|e| e.to_string())?);
                }
            }
        }
        for (&(a, b), ab) in &maps {
            for c in 0..n {
                let (Some(bc), Some(ac)) = (maps.get(&(b, c)), maps.get(&(a, c))) else { continue };
                triples += 1;
                let ok = ac.iter().all(|(k, v)| ab.get(k).and_then(|m| bc.get(m)) == Some(v))
                    && ab.len() == ac.len();
                if !ok {
                    violations += 1;
                }
            }
        }
    }
    check(violations == 0, || format!("{violations} of {triples} triples violate composition"))?;
    Ok(format!("{triples} comparable triples over 3 spaces, 0 violations"))
}

fn commensurator() -> Outcome {
    let radii = [4, 6, 8, 10];
    let z2 = Group::free_abelian(2);
    let axis = SubgroupSpec::Generated(vec![Element::Vector(vec![1, 0])]);
    let probe = CommensuratorProbe::new(&z2, &axis, &radii, usize::MAX).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut wrong = Vec::new();
    for _ in 0..20 {
        let x: i64 = rng.gen_range(-3..=3);
        let rest = 3 - x.abs();
        let y: i64 = rng.gen_range(-rest..=rest);
        let g = Element::Vector(vec![x, y]);
        let rep = probe.probe(&g).map_err(|e| e.to_string())?;
        if !matches!(rep.verdict, CommensuratorVerdict::Bounded(_)) {
            wrong.push(format!("Z^2 {g:?}: {}", rep.verdict));
        }
    }
    let f2 = Group::free(2);
    let a = SubgroupSpec::Generated(vec![Element::Word(vec![1])]);
    let probe = CommensuratorProbe::new(&f2, &a, &radii, usize::MAX).map_err(|e| e.to_string())?;
    let ball = Ball::build(&f2, 3).map_err(|e| e.to_string())?;
    for g in ball.points() {
        let Element::Word(w) = g else { unreachable!() };
        let power_of_a = w.iter().all(|&l| l.abs() == 1);
        let rep = probe.probe(g).map_err(|e| e.to_string())?;
        let bounded = matches!(rep.verdict, CommensuratorVerdict::Bounded(_));
        if bounded != power_of_a {
            wrong.push(format!("F2 {}: {}", f2.format(g), rep.verdict));
        }
    }
    check(wrong.is_empty(), || format!("misclassified: {wrong:?}"))?;
    Ok(format!("20 Z^2 translates bounded; {} elements of F2 classified, 0 errors", ball.len()))
}

fn stabilizer() -> Outcome {
    let z2 = Group::free_abelian(2);
    let space = FiniteSpace::cayley(Ball::build(&z2, 12).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let ball = space.ball().unwrap();
    let a = trace_subset(ball, &SubsetSpec::Predicate("x-axis".into())).map_err(|e| e.to_string())?;
    let q = QIMapSample::measure(&space, &space, PointMap::identity(space.len()), 200_000).map_err(|e| e.to_string())?;
    let res = approx_stabilizer(&q, &space, &space, &a, 3.0).map_err(|e| e.to_string())?;
    let expected: Vec<usize> = (0..ball.len())
        .filter(|&i| res.values[i].is_some())
        .filter(|&i| matches!(ball.point(i), Element::Vector(v) if v[1].abs() <= 3))
        .collect();
    check(res.members == expected, || format!("{} members, expected {}", res.members.len(), expected.len()))?;

    let f2 = Group::free(2);
    let fs = FiniteSpace::cayley(Ball::build(&f2, 8).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let fb = fs.ball().unwrap();
    let axis = trace_subset(fb, &SubsetSpec::Subgroup(SubgroupSpec::Generated(vec![Element::Word(vec![1])])))
        .map_err(|e| e.to_string())?;
    let q = QIMapSample::measure(&fs, &fs, PointMap::identity(fs.len()), 200_000).map_err(|e| e.to_string())?;
    let m = 2.0;
    let res = approx_stabilizer(&q, &fs, &fs, &axis, m).map_err(|e| e.to_string())?;
    let half = fb.radius() / 2;
    let inner: Vec<usize> = res.members.iter().copied().filter(|&i| fb.length(i) <= half).collect();
    let (l, c) = (q.distortion.l, q.distortion.c);
    let relaxed = 2.0 * m * l + l * c + c;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut tested, mut failed) = (0, 0);
    while tested < 100 {
        let g = fb.point(inner[rng.gen_range(0..inner.len())]);
        let h = fb.point(inner[rng.gen_range(0..inner.len())]);
        let gh = f2.multiply(g, h);
        let Some(k) = fb.index_of(&gh).filter(|&k| fb.length(k) <= half) else { continue };
        tested += 1;
        if !res.values[k].is_some_and(|v| v <= relaxed + 1e-9) {
            failed += 1;
        }
    }
    check(failed == 0, || format!("{failed} of 100 products above {relaxed}"))?;
    Ok(format!("Z^2: {} members = {{|g2| <= 3}}; F2: 100 products within {relaxed}", expected.len()))
}

fn exact_verdicts(s: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (key, block) in [("source", s), ("target", &s["target"])] {
        for v in block["per_sigma"].as_array().into_iter().flatten() {
            let verdict = v["verdict"].as_str().unwrap_or("").to_string();
            let kind = if verdict.starts_with("exact") || verdict == "empty" {
                verdict
            } else {
                verdict.split('(').next().unwrap().to_string()
            };
            out.push((format!("{key} sigma {}", v["sigma"]), kind));
        }
    }
    out
}

fn thickening() -> Outcome {
    let opts = RunOptions::default();
    let mut compared = 0;
    let mut changed = Vec::new();
    for entry in catalog() {
        let mut doc = entry.document.clone();
        match doc["command"].as_str() {
            Some("filtered-ends") if doc.get("census").is_none() => {}
            Some("ends") => {
                doc["command"] = json!("filtered-ends");
                doc["subset"] = json!("basepoint");
                doc["grids"] = json!({"sigma": [1]});
            }
            _ => continue,
        }
        let base_desc = coarse_ends::experiment::parse_description(&doc).map_err(|e| e.to_string())?;
        let base = exact_verdicts(&run(&base_desc, Command::FilteredEnds, &opts).map_err(|e| e.to_string())?.summary);
        for r in [1.0, 2.0] {
            doc["thicken"] = json!(r);
            let d = coarse_ends::experiment::parse_description(&doc).map_err(|e| e.to_string())?;
            let got = exact_verdicts(&run(&d, Command::FilteredEnds, &opts).map_err(|e| e.to_string())?.summary);
            for ((where_, a), (_, b)) in base.iter().zip(&got) {
                compared += 1;
                let stabilized = a.starts_with("exact") || a == "empty";
                if stabilized && a != b {
                    changed.push(format!("{} r={r} {where_}: {a} -> {b}", entry.id));
                }
            }
        }
    }
    check(changed.is_empty(), || format!("changed: {changed:?}"))?;
    Ok(format!("{compared} verdicts compared at r = 1, 2; none changed"))
}

fn full_catalog_csv(threads: usize) -> Result<String, String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
    pool.install(|| {
        let mut out = String::new();
        for entry in catalog() {
            let d = entry.description().map_err(|e| e.to_string())?;
            let r = run_default(&d, &RunOptions::default()).map_err(|e| e.to_string())?;
            out.push_str(&r.to_csv().map_err(|e| e.to_string())?);
        }
        Ok(out)
    })
}

fn determinism() -> Outcome {
    let one = full_catalog_csv(1)?;
    let eight = full_catalog_csv(8)?;
    check(one == eight, || "CSV differs between 1 and 8 workers".into())?;
    Ok(format!("{} catalog entries, {} CSV bytes identical", catalog().len(), one.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Z^2 relative to the x-axis", z2_axis),
        ("# of four sampled lines", hash_lines),
        ("sampled plane relative to a line", plane_strip),
        ("product-row space, m = 3", product_row),
        ("classical ends of Z, Z^2, F2", classical),
        ("two generating sets of Z^2", two_gensets),
        ("sigma-components vs breadth-first search", oracle),
        ("transition maps compose", functoriality),
        ("commensurator probes", commensurator),
        ("approximate stabilizers", stabilizer),
        ("thickening C", thickening),
        ("worker-count determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
