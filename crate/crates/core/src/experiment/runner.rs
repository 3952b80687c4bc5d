use std::collections::HashMap;

use serde_json::{json, Value};

use crate::ends::{
    classical_ends, filtered_ends, induced_end_map, unbounded_census, EndsConfig, FilteredEndsReport, InducedSide,
    SpacePair,
};
use crate::error::{Error, Result};
use crate::experiment::report::{Report, ReportRow};
use crate::experiment::schema::{Command, Description, ElementList, LinesLayout, MapSpec, Subset, SpaceSpec};
use crate::group::{trace_subset, Ball, Element, SubgroupSpec, DEFAULT_CAP};
use crate::pairs::{
    approx_stabilizer, default_m_grid, enumerate_cosets, induce_finite_index_collection, pair_qi_check,
    CommensuratorProbe, QIMapSample,
};
use crate::space::{
    core_hausdorff, hash_segments, product_row, sampled_lines, sampled_plane, truncated_hausdorff, CoordMetric,
    FiniteSpace, PointMap, Segment, UnboundedRule, EPS,
};

/// Limits applied to every run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    /// Largest ball the run may build.
    pub cap: usize,
    /// Pair budget for distortion measurements.
    pub max_pairs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { cap: DEFAULT_CAP, max_pairs: 200_000 }
    }
}

/// Builds the finite space a description refers to.
pub fn build_space(spec: &SpaceSpec, cap: usize) -> Result<FiniteSpace> {
    match spec {
        SpaceSpec::Cayley { group, radius } => FiniteSpace::cayley(Ball::build_with_cap(group, *radius, cap)?),
        SpaceSpec::SampledLines { layout, step, center, radius, manhattan } => {
            let metric = if *manhattan { CoordMetric::Manhattan } else { CoordMetric::Euclidean };
            let segments = match layout {
                LinesLayout::Segments(s) => s.iter().map(|[a, b]| Segment { from: *a, to: *b }).collect(),
                LinesLayout::Hash { extent } => hash_segments(*extent),
                LinesLayout::Plane => {
                    if *center != [0.0, 0.0] {
                        return Err(Error::config("the plane preset is centred at the origin"));
                    }
                    return sampled_plane(*step, *radius, metric);
                }
            };
            sampled_lines(&segments, *step, *center, *radius, metric)
        }
        SpaceSpec::ProductRow { m, step, radius } => product_row(*m, *step, *radius),
        SpaceSpec::Explicit { distances, basepoint, radius } => {
            FiniteSpace::table(distances.clone(), *basepoint, *radius)
        }
    }
}

fn coord_key(p: &[f64]) -> Vec<i64> {
    p.iter().map(|x| (x * 1e6).round() as i64).collect()
}

/// Points of `space` making up `subset`, thickened by `thicken`.
pub fn resolve_subset(space: &FiniteSpace, subset: &Subset, thicken: Option<f64>) -> Result<Vec<usize>> {
    let n = space.len();
    let mut pts = match subset {
        Subset::Group(spec) => {
            let ball = space.ball().ok_or_else(|| Error::config("group subsets need a cayley space"))?;
            trace_subset(ball, spec)?
        }
        Subset::Basepoint => vec![space.basepoint()],
        Subset::Predicate(name) => {
            let axis = if name == "x-axis" { 1 } else { 0 };
            (0..n)
                .filter(|&i| space.coordinates(i).is_some_and(|c| c.len() == 2 && c[axis].abs() <= EPS))
                .collect()
        }
        Subset::Coords(cs) => {
            let index: HashMap<Vec<i64>, usize> = (0..n)
                .filter_map(|i| space.coordinates(i).map(|c| (coord_key(c), i)))
                .collect();
            cs.iter()
                .map(|c| {
                    index
                        .get(&coord_key(c))
                        .copied()
                        .ok_or_else(|| Error::domain(format!("{c:?} is not a sample point")))
                })
                .collect::<Result<_>>()?
        }
        Subset::Indices(ix) => {
            if let Some(bad) = ix.iter().find(|&&i| i >= n) {
                return Err(Error::domain(format!("point {bad} is not in the space")));
            }
            ix.clone()
        }
    };
    pts.sort_unstable();
    pts.dedup();
    if pts.is_empty() {
        return Err(Error::domain("subset has no points in the truncation"));
    }
    match thicken {
        Some(r) if r > 0.0 => {
            let d = space.distances_to_subset(&pts)?;
            Ok((0..n).filter(|&i| d[i] <= r + EPS).collect())
        }
        _ => Ok(pts),
    }
}

fn point_map(map: &MapSpec, source: &FiniteSpace, target: &FiniteSpace) -> Result<PointMap> {
    let images = match (source.ball(), target.ball()) {
        (Some(sb), Some(tb)) => {
            let tg = tb.group();
            (0..sb.len())
                .map(|i| {
                    let p = sb.point(i);
                    let image = match map {
                        MapSpec::Identity => p.clone(),
                        MapSpec::Swap => match p {
                            Element::Vector(v) if v.len() == 2 => Element::Vector(vec![v[1], v[0]]),
                            _ => return Err(Error::config("swap is defined on rank-2 free abelian groups")),
                        },
                        MapSpec::Translate(t) => tg.multiply(t, p),
                    };
                    tb.index_of(&image).ok_or_else(|| {
                        Error::domain(format!("image of {} leaves the target ball", sb.group().format(p)))
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
        (None, None) if *map == MapSpec::Identity => {
            let index: HashMap<Vec<i64>, usize> = (0..target.len())
                .filter_map(|i| target.coordinates(i).map(|c| (coord_key(c), i)))
                .collect();
            (0..source.len())
                .map(|i| {
                    source
                        .coordinates(i)
                        .and_then(|c| index.get(&coord_key(c)).copied())
                        .ok_or_else(|| Error::domain(format!("point {i} has no image in the target")))
                })
                .collect::<Result<_>>()?
        }
        _ => return Err(Error::config("this map needs cayley spaces on both sides")),
    };
    Ok(PointMap { images })
}

fn ends_config(d: &Description) -> EndsConfig {
    EndsConfig {
        window: d.grids.window,
        n_max: d.grids.n_max,
        rule: UnboundedRule { margin: d.grids.margin, depth_fraction: d.grids.depth_fraction },
    }
}

fn fmt_window(w: Option<(f64, f64)>) -> String {
    w.map(|(a, b)| format!("[{a},{b}]")).unwrap_or_default()
}

fn ends_rows(command: &str, id: &str, space: &FiniteSpace, rep: &FilteredEndsReport, rows: &mut Vec<ReportRow>) {
    let r = Some(space.radius());
    for d in &rep.diagrams {
        for (k, level) in d.levels.iter().enumerate() {
            let p = &level.partition;
            rows.push(ReportRow {
                command: command.into(),
                space_id: id.into(),
                sigma: Some(d.sigma),
                mu: Some(level.mu),
                radius: r,
                alive_count: Some(p.alive_count()),
                component_count: Some(p.component_count()),
                unbounded_count: Some(p.unbounded_count()),
                trusted: Some(level.trusted as u8),
                verdict: String::new(),
                value: if k == 0 { String::new() } else if level.bijective { "bijective".into() } else { "not_bijective".into() },
            });
        }
    }
    for v in &rep.per_sigma {
        rows.push(ReportRow {
            command: command.into(),
            space_id: id.into(),
            sigma: Some(v.sigma),
            radius: r,
            verdict: v.verdict.to_string(),
            value: fmt_window(v.window),
            ..Default::default()
        });
    }
    for c in &rep.cross {
        rows.push(ReportRow {
            command: command.into(),
            space_id: id.into(),
            sigma: Some(c.from),
            mu: c.mu,
            radius: r,
            verdict: "cross".into(),
            value: format!("to={} bijective={}", c.to, c.bijective as u8),
            ..Default::default()
        });
    }
    rows.push(ReportRow {
        command: command.into(),
        space_id: id.into(),
        radius: r,
        verdict: rep.final_verdict.to_string(),
        value: "final".into(),
        ..Default::default()
    });
}

fn ends_summary(rep: &FilteredEndsReport) -> Value {
    json!({
        "final_verdict": rep.final_verdict.to_string(),
        "per_sigma": rep.per_sigma.iter().map(|v| json!({
            "sigma": v.sigma,
            "verdict": v.verdict.to_string(),
            "window": v.window.map(|(a, b)| vec![a, b]),
        })).collect::<Vec<_>>(),
        "cross": rep.cross.iter().map(|c| json!({
            "from": c.from, "to": c.to, "mu": c.mu, "bijective": c.bijective,
        })).collect::<Vec<_>>(),
    })
}

fn mu_grid(d: &Description, space: &FiniteSpace) -> Vec<f64> {
    if d.grids.mu.is_empty() {
        crate::ends::default_mu_grid(space.radius(), space.unit(), space.is_graph_metric())
    } else {
        d.grids.mu.clone()
    }
}

fn require<'a, T>(x: Option<&'a T>, what: &str) -> Result<&'a T> {
    x.ok_or_else(|| Error::config(format!("this command needs {what}")))
}

/// Runs `command` on a parsed description.
pub fn run(d: &Description, command: Command, opts: &RunOptions) -> Result<Report> {
    let mut report = match command {
        Command::FilteredEnds => run_filtered(d, opts)?,
        Command::Ends => run_ends(d, opts)?,
        Command::PairCheck => run_pair_check(d, opts)?,
        Command::Stabilizer => run_stabilizer(d, opts)?,
        Command::Hausdorff => run_hausdorff(d, opts)?,
        Command::Commensurator => run_commensurator(d, opts)?,
    };
    if let Value::Object(m) = &mut report.summary {
        m.insert("id".into(), json!(d.id));
        m.insert("command".into(), json!(command.name()));
    }
    report.sort();
    Ok(report)
}

/// Runs the description under its own command (filtered-ends by default).
pub fn run_default(d: &Description, opts: &RunOptions) -> Result<Report> {
    run(d, d.command.unwrap_or(Command::FilteredEnds), opts)
}

fn new_report(command: Command, d: &Description) -> Report {
    Report { command: command.name().into(), id: d.id.clone(), rows: Vec::new(), summary: json!({}) }
}

fn run_filtered(d: &Description, opts: &RunOptions) -> Result<Report> {
    let cmd = Command::FilteredEnds.name();
    let mut report = new_report(Command::FilteredEnds, d);
    let cfg = ends_config(d);
    let space = build_space(&d.space, opts.cap)?;
    if d.grids.sigma.is_empty() {
        return Err(Error::config("grids.sigma is empty"));
    }
    if d.census {
        let rows = unbounded_census(&space, &d.grids.sigma, &cfg)?;
        for c in &rows {
            report.rows.push(ReportRow {
                command: cmd.into(),
                space_id: d.id.clone(),
                sigma: Some(c.sigma),
                mu: Some(0.0),
                radius: Some(space.radius()),
                alive_count: Some(space.len()),
                component_count: Some(c.components),
                unbounded_count: Some(c.unbounded),
                trusted: Some(c.trusted as u8),
                verdict: c.verdict.to_string(),
                value: "census".into(),
            });
        }
        report.summary = json!({
            "census": rows.iter().map(|c| json!({"sigma": c.sigma, "verdict": c.verdict.to_string()})).collect::<Vec<_>>(),
        });
        return Ok(report);
    }
    let subset = resolve_subset(&space, require(d.subset.as_ref(), "a subset")?, d.thicken)?;
    let mus = mu_grid(d, &space);
    let rep = filtered_ends(&space, &subset, &d.grids.sigma, &mus, &cfg)?;
    ends_rows(cmd, &d.id, &space, &rep, &mut report.rows);
    report.summary = ends_summary(&rep);
    let Some(target) = &d.target else {
        return Ok(report);
    };
    let tspace = build_space(&target.space, opts.cap)?;
    let tsubset = resolve_subset(&tspace, require(target.subset.as_ref(), "a target subset")?, d.thicken)?;
    let tid = format!("{}:target", d.id);
    let trep = filtered_ends(&tspace, &tsubset, &d.grids.sigma, &mus, &cfg)?;
    ends_rows(cmd, &tid, &tspace, &trep, &mut report.rows);
    let map = point_map(d.map.as_ref().unwrap_or(&MapSpec::Identity), &space, &tspace)?;
    let q = QIMapSample::measure(&space, &tspace, map, opts.max_pairs)?;
    let (lambda, epsilon) = (q.distortion.l, q.distortion.c);
    let spair = SpacePair::new(&space, &subset)?;
    let tpair = SpacePair::new(&tspace, &tsubset)?;
    let mut induced = Vec::new();
    for &sigma in &d.grids.sigma {
        let source = InducedSide { pair: &spair, sigma, mu_grid: &mus };
        let tside = InducedSide { pair: &tpair, sigma: 0.0, mu_grid: &mus };
        let (verdict, value, entry) = match induced_end_map(&q.map, lambda, epsilon, source, tside, &cfg) {
            Ok(m) => {
                let v = if m.bijective { "bijective" } else { "not_bijective" };
                let pairs: Vec<String> = m.map.iter().map(|(a, b)| format!("{a}->{b}")).collect();
                let entry = json!({
                    "sigma": sigma, "target_sigma": m.target_sigma, "r": m.r,
                    "bijective": m.bijective, "map": pairs.clone(), "levels": m.levels,
                });
                (v.to_string(), pairs.join(" "), entry)
            }
            Err(Error::Inconclusive(msg)) => {
                ("inconclusive".to_string(), msg.clone(), json!({"sigma": sigma, "inconclusive": msg}))
            }
            Err(e) => return Err(e),
        };
        report.rows.push(ReportRow {
            command: cmd.into(),
            space_id: format!("{}:induced", d.id),
            sigma: Some(sigma),
            radius: Some(space.radius()),
            verdict,
            value,
            ..Default::default()
        });
        induced.push(entry);
    }
    if let Value::Object(m) = &mut report.summary {
        m.insert("target_final_verdict".into(), json!(trep.final_verdict.to_string()));
        m.insert("target".into(), ends_summary(&trep));
        m.insert("lambda".into(), json!(lambda));
        m.insert("epsilon".into(), json!(epsilon));
        m.insert("induced".into(), Value::Array(induced));
    }
    Ok(report)
}

fn run_ends(d: &Description, opts: &RunOptions) -> Result<Report> {
    let mut report = new_report(Command::Ends, d);
    let space = build_space(&d.space, opts.cap)?;
    let rep = classical_ends(&space, &d.grids.sigma, &d.grids.mu, &ends_config(d))?;
    ends_rows(Command::Ends.name(), &d.id, &space, &rep, &mut report.rows);
    report.summary = ends_summary(&rep);
    Ok(report)
}

fn subgroup_list(d: &Description) -> Result<&[SubgroupSpec]> {
    if d.subgroups.is_empty() {
        return Err(Error::config("this command needs a non-empty \"subgroups\" list"));
    }
    Ok(&d.subgroups)
}

fn run_pair_check(d: &Description, opts: &RunOptions) -> Result<Report> {
    let cmd = Command::PairCheck.name();
    let mut report = new_report(Command::PairCheck, d);
    let space = build_space(&d.space, opts.cap)?;
    let ball = space.ball().ok_or_else(|| Error::config("pair checks need a cayley space"))?;
    let group = ball.group();
    let r = Some(space.radius());
    if let Some(h) = &d.finite_index {
        let coll = induce_finite_index_collection(&space, h, subgroup_list(d)?)?;
        let mut members = Vec::new();
        for m in &coll.members {
            let rep = group.format(ball.point(m.rep));
            let f = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_else(|| "none".into());
            report.rows.push(ReportRow {
                command: cmd.into(),
                space_id: d.id.clone(),
                radius: r,
                verdict: "orbit".into(),
                value: format!(
                    "P{} rep={} d1={} d2={} witness={}",
                    m.subgroup, rep, f(m.d1), m.d2, f(m.witness)
                ),
                ..Default::default()
            });
            members.push(json!({
                "subgroup": m.subgroup, "rep": rep, "d1": m.d1, "d2": m.d2, "witness": m.witness,
                "q_points": m.q_trace.len(),
            }));
        }
        report.summary = json!({"index": coll.index, "orbits": coll.members.len(), "members": members});
        return Ok(report);
    }
    let sf = enumerate_cosets(ball, subgroup_list(d)?)?;
    let (tspace, tspecs) = match &d.target {
        Some(t) => (build_space(&t.space, opts.cap)?, if d.target_subgroups.is_empty() { &d.subgroups } else { &d.target_subgroups }),
        None => (space.clone(), &d.subgroups),
    };
    let tball = tspace.ball().ok_or_else(|| Error::config("pair checks need a cayley target"))?;
    let tf = enumerate_cosets(tball, tspecs)?;
    let map = point_map(d.map.as_ref().unwrap_or(&MapSpec::Identity), &space, &tspace)?;
    let q = QIMapSample::measure(&space, &tspace, map, opts.max_pairs)?;
    let m_grid = if d.grids.m.is_empty() { default_m_grid(tspace.radius()) } else { d.grids.m.clone() };
    let check = pair_qi_check(&q, (&space, &sf), (&tspace, &tf), &m_grid)?;
    let least = check.least_m.map(|m| m.to_string()).unwrap_or_else(|| "none".into());
    report.rows.push(ReportRow {
        command: cmd.into(),
        space_id: d.id.clone(),
        radius: r,
        verdict: "least_m".into(),
        value: least.clone(),
        ..Default::default()
    });
    let mut matches = Vec::new();
    for (a, bs) in &check.matches {
        let src = group.format(ball.point(sf.cosets[*a].rep));
        let tgt: Vec<String> = bs.iter().map(|&b| tball.group().format(tball.point(tf.cosets[b].rep))).collect();
        report.rows.push(ReportRow {
            command: cmd.into(),
            space_id: d.id.clone(),
            radius: r,
            verdict: "match".into(),
            value: format!("P{}:{} -> {}", sf.cosets[*a].subgroup, src, tgt.join(" ")),
            ..Default::default()
        });
        matches.push(json!({"source": src, "targets": tgt}));
    }
    report.summary = json!({
        "least_m": check.least_m,
        "verdict": if check.least_m.is_some() { "pair_qi" } else { "no_match" },
        "lambda": q.distortion.l,
        "epsilon": q.distortion.c,
        "inverse_defect": q.inverse_defect,
        "matches": matches,
        "unmatched_source": check.unmatched_source.len(),
        "unmatched_target": check.unmatched_target.len(),
    });
    Ok(report)
}

fn run_stabilizer(d: &Description, opts: &RunOptions) -> Result<Report> {
    let cmd = Command::Stabilizer.name();
    let mut report = new_report(Command::Stabilizer, d);
    let space = build_space(&d.space, opts.cap)?;
    let ball = space.ball().ok_or_else(|| Error::config("stabilizer queries need a cayley space"))?;
    let (x, a) = match &d.target {
        Some(t) => {
            let xs = build_space(&t.space, opts.cap)?;
            let a = resolve_subset(&xs, require(t.subset.as_ref(), "a target subset")?, d.thicken)?;
            (xs, a)
        }
        None => {
            let a = resolve_subset(&space, require(d.subset.as_ref(), "a subset")?, d.thicken)?;
            (space.clone(), a)
        }
    };
    let map = point_map(d.map.as_ref().unwrap_or(&MapSpec::Identity), &space, &x)?;
    let q = QIMapSample::measure(&space, &x, map, opts.max_pairs)?;
    if d.grids.m.is_empty() {
        return Err(Error::config("grids.M is empty"));
    }
    let mut per_m = Vec::new();
    for &m in &d.grids.m {
        let res = approx_stabilizer(&q, &space, &x, &a, m)?;
        let members: Vec<String> = res.members.iter().map(|&i| ball.group().format(ball.point(i))).collect();
        report.rows.push(ReportRow {
            command: cmd.into(),
            space_id: d.id.clone(),
            radius: Some(space.radius()),
            verdict: "members".into(),
            value: format!("M={} count={} inconclusive={}", m, members.len(), res.inconclusive.len()),
            ..Default::default()
        });
        per_m.push(json!({"M": m, "members": members, "inconclusive": res.inconclusive.len()}));
    }
    report.summary = json!({"lambda": q.distortion.l, "epsilon": q.distortion.c, "results": per_m});
    Ok(report)
}

fn radii(d: &Description) -> Result<Vec<Option<u32>>> {
    match (&d.space, d.grids.radii.is_empty()) {
        (_, true) => Ok(vec![None]),
        (SpaceSpec::Cayley { .. }, false) => Ok(d.grids.radii.iter().map(|&r| Some(r)).collect()),
        _ => Err(Error::config("an R list needs a cayley space")),
    }
}

fn space_at(d: &Description, r: Option<u32>, cap: usize) -> Result<FiniteSpace> {
    match (&d.space, r) {
        (SpaceSpec::Cayley { group, .. }, Some(r)) => FiniteSpace::cayley(Ball::build_with_cap(group, r, cap)?),
        _ => build_space(&d.space, cap),
    }
}

fn run_hausdorff(d: &Description, opts: &RunOptions) -> Result<Report> {
    let cmd = Command::Hausdorff.name();
    let mut report = new_report(Command::Hausdorff, d);
    let sa = require(d.subset.as_ref(), "a subset")?;
    let sb = require(d.other.as_ref(), "an \"other\" subset")?;
    let mut values = Vec::new();
    for r in radii(d)? {
        let space = space_at(d, r, opts.cap)?;
        let a = resolve_subset(&space, sa, d.thicken)?;
        let b = resolve_subset(&space, sb, d.thicken)?;
        let plain = truncated_hausdorff(&space, &a, &b)?;
        let core = core_hausdorff(&space, &a, &b, space.radius() / 2.0)?;
        let core_s = core.map(|v| v.to_string()).unwrap_or_else(|| "none".into());
        report.rows.push(ReportRow {
            command: cmd.into(),
            space_id: d.id.clone(),
            radius: Some(space.radius()),
            verdict: "hdist".into(),
            value: format!("truncated={plain} core={core_s}"),
            ..Default::default()
        });
        values.push(json!({"R": space.radius(), "truncated": plain, "core": core}));
    }
    report.summary = json!({"values": values});
    Ok(report)
}

fn run_commensurator(d: &Description, opts: &RunOptions) -> Result<Report> {
    let cmd = Command::Commensurator.name();
    let mut report = new_report(Command::Commensurator, d);
    let SpaceSpec::Cayley { group, radius } = &d.space else {
        return Err(Error::config("commensurator probes need a cayley space"));
    };
    let p = match d.subgroups.as_slice() {
        [p] => p,
        _ => return Err(Error::config("commensurator probes take exactly one subgroup")),
    };
    let rs = if d.grids.radii.is_empty() { vec![*radius] } else { d.grids.radii.clone() };
    let elements: Vec<Element> = match require(d.elements.as_ref(), "an element list")? {
        ElementList::Listed(es) => es.clone(),
        ElementList::Ball(k) => Ball::build_with_cap(group, *k, opts.cap)?.points().to_vec(),
    };
    let probe = CommensuratorProbe::new(group, p, &rs, opts.cap)?;
    let mut out = Vec::new();
    for g in &elements {
        let name = group.format(g);
        let rep = probe.probe(g)?;
        for (r, v) in &rep.values {
            report.rows.push(ReportRow {
                command: cmd.into(),
                space_id: d.id.clone(),
                radius: Some(*r as f64),
                verdict: "hdist".into(),
                value: format!("g={} {}", name, v.map(|x| x.to_string()).unwrap_or_else(|| "none".into())),
                ..Default::default()
            });
        }
        report.rows.push(ReportRow {
            command: cmd.into(),
            space_id: d.id.clone(),
            verdict: rep.verdict.to_string(),
            value: format!("g={name}"),
            ..Default::default()
        });
        out.push(json!({
            "g": name,
            "verdict": rep.verdict.to_string(),
            "values": rep.values.iter().map(|(r, v)| json!([r, v])).collect::<Vec<_>>(),
        }));
    }
    report.summary = json!({"probes": out});
    Ok(report)
}
