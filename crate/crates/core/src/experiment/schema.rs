//! Space descriptions: JSON documents validated into typed experiments.

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::group::{Character, Element, Group, GroupKind, SubgroupSpec, SubsetSpec};
use crate::group::element::parse_word;

/// Subcommands a description can be run under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    FilteredEnds,
    Ends,
    PairCheck,
    Stabilizer,
    Hausdorff,
    Commensurator,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::FilteredEnds,
        Command::Ends,
        Command::PairCheck,
        Command::Stabilizer,
        Command::Hausdorff,
        Command::Commensurator,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::FilteredEnds => "filtered-ends",
            Command::Ends => "ends",
            Command::PairCheck => "pair-check",
            Command::Stabilizer => "stabilizer",
            Command::Hausdorff => "hausdorff",
            Command::Commensurator => "commensurator",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LinesLayout {
    Segments(Vec<[[f64; 2]; 2]>),
    /// The `#` shape with the given half-length.
    Hash { extent: f64 },
    /// Aligned sample of a whole disc.
    Plane,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpaceSpec {
    Cayley { group: Group, radius: u32 },
    SampledLines { layout: LinesLayout, step: f64, center: [f64; 2], radius: f64, manhattan: bool },
    ProductRow { m: i64, step: f64, radius: f64 },
    Explicit { distances: Vec<Vec<f64>>, basepoint: usize, radius: f64 },
}

impl SpaceSpec {
    pub fn group(&self) -> Option<&Group> {
        match self {
            SpaceSpec::Cayley { group, .. } => Some(group),
            _ => None,
        }
    }
}

/// Subset of a space, in the vocabulary of its kind.
#[derive(Clone, Debug, PartialEq)]
pub enum Subset {
    Group(SubsetSpec),
    Basepoint,
    /// `x-axis` / `y-axis` on coordinate spaces.
    Predicate(String),
    Coords(Vec<Vec<f64>>),
    Indices(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grids {
    pub sigma: Vec<f64>,
    pub mu: Vec<f64>,
    pub radii: Vec<u32>,
    pub m: Vec<f64>,
    pub window: usize,
    pub n_max: usize,
    pub margin: Option<f64>,
    pub depth_fraction: f64,
}

impl Default for Grids {
    fn default() -> Self {
        Grids {
            sigma: Vec::new(),
            mu: Vec::new(),
            radii: Vec::new(),
            m: Vec::new(),
            window: 3,
            n_max: 64,
            margin: None,
            depth_fraction: 0.25,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MapSpec {
    /// Same group element on both sides.
    Identity,
    /// `(x, y) ↦ (y, x)` on ℤ².
    Swap,
    /// Left multiplication by an element.
    Translate(Element),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Target {
    pub space: SpaceSpec,
    pub subset: Option<Subset>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ElementList {
    Listed(Vec<Element>),
    /// Every element of word length at most `k`.
    Ball(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Description {
    pub id: String,
    pub description: Option<String>,
    pub command: Option<Command>,
    pub space: SpaceSpec,
    pub subset: Option<Subset>,
    pub other: Option<Subset>,
    pub grids: Grids,
    pub target: Option<Target>,
    pub map: Option<MapSpec>,
    pub subgroups: Vec<SubgroupSpec>,
    pub target_subgroups: Vec<SubgroupSpec>,
    pub elements: Option<ElementList>,
    pub finite_index: Option<SubgroupSpec>,
    pub thicken: Option<f64>,
    pub census: bool,
}

const TOP_KEYS: &[&str] = &[
    "id", "description", "command", "space", "cayley", "sampled-lines", "product-row", "explicit",
    "subset", "other", "grids", "target", "map", "subgroups", "target_subgroups", "elements",
    "finite_index", "thicken", "census",
];

const SPACE_KINDS: &[&str] = &["cayley", "sampled-lines", "product-row", "explicit"];

#[derive(Clone, Copy)]
struct Node<'a> {
    v: &'a Value,
    ptr: &'a str,
}

fn err(ptr: &str, msg: impl Into<String>) -> Error {
    Error::schema(if ptr.is_empty() { "/".to_string() } else { ptr.to_string() }, msg)
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

struct Obj<'a> {
    map: &'a Map<String, Value>,
    ptr: String,
}

impl<'a> Obj<'a> {
    fn new(node: Node<'a>, allowed: &[&str]) -> Result<Obj<'a>> {
        let map = node.v.as_object().ok_or_else(|| err(node.ptr, "expected an object"))?;
        for k in map.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(err(&format!("{}/{}", node.ptr, escape(k)), format!("unknown key {k:?}")));
            }
        }
        Ok(Obj { map, ptr: node.ptr.to_string() })
    }

    fn path(&self, key: &str) -> String {
        format!("{}/{}", self.ptr, escape(key))
    }

    fn get(&self, key: &str) -> Option<(&'a Value, String)> {
        self.map.get(key).map(|v| (v, self.path(key)))
    }

    fn req(&self, key: &str) -> Result<(&'a Value, String)> {
        self.get(key).ok_or_else(|| err(&self.ptr, format!("missing key {key:?}")))
    }
}

fn as_f64(v: &Value, ptr: &str) -> Result<f64> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| err(ptr, "expected a number"))
}

fn as_i64(v: &Value, ptr: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| err(ptr, "expected an integer"))
}

fn as_u32(v: &Value, ptr: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| err(ptr, "expected a non-negative integer"))
}

fn as_usize(v: &Value, ptr: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| err(ptr, "expected a non-negative integer"))
}

fn as_str<'a>(v: &'a Value, ptr: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| err(ptr, "expected a string"))
}

fn as_array<'a>(v: &'a Value, ptr: &str) -> Result<Vec<(&'a Value, String)>> {
    let arr = v.as_array().ok_or_else(|| err(ptr, "expected an array"))?;
    Ok(arr.iter().enumerate().map(|(i, x)| (x, format!("{ptr}/{i}"))).collect())
}

fn f64_list(v: &Value, ptr: &str) -> Result<Vec<f64>> {
    as_array(v, ptr)?.into_iter().map(|(x, p)| as_f64(x, &p)).collect()
}

fn point2(v: &Value, ptr: &str) -> Result<[f64; 2]> {
    let xs = f64_list(v, ptr)?;
    <[f64; 2]>::try_from(xs).map_err(|_| err(ptr, "expected a point [x, y]"))
}

/// Parses a JSON description.
pub fn parse_description(value: &Value) -> Result<Description> {
    let root = Obj::new(Node { v: value, ptr: "" }, TOP_KEYS)?;
    let (id, id_ptr) = root.req("id")?;
    let id = as_str(id, &id_ptr)?.to_string();
    if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
        return Err(err(&id_ptr, "id must be non-empty and use [A-Za-z0-9_-]"));
    }
    let description = match root.get("description") {
        Some((v, p)) => Some(as_str(v, &p)?.to_string()),
        None => None,
    };
    let command = match root.get("command") {
        Some((v, p)) => {
            let s = as_str(v, &p)?;
            Some(Command::parse(s).ok_or_else(|| err(&p, format!("unknown command {s:?}")))?)
        }
        None => None,
    };
    let space = parse_space_block(&root)?;
    for kind in SPACE_KINDS {
        if root.map.contains_key(*kind) && space_kind_name(&space) != *kind {
            return Err(err(&root.path(kind), "block does not match the space kind"));
        }
    }
    let subset = root.get("subset").map(|(v, p)| parse_subset(&space, v, &p)).transpose()?;
    let other = root.get("other").map(|(v, p)| parse_subset(&space, v, &p)).transpose()?;
    let grids = match root.get("grids") {
        Some((v, p)) => parse_grids(v, &p)?,
        None => Grids::default(),
    };
    let target = root.get("target").map(|(v, p)| parse_target(v, &p)).transpose()?;
    let map = root.get("map").map(|(v, p)| parse_map(&space, v, &p)).transpose()?;
    let group = space.group();
    let need_group = |p: &str| group.ok_or_else(|| err(p, "only meaningful for cayley spaces"));
    let subgroups = match root.get("subgroups") {
        Some((v, p)) => {
            let g = need_group(&p)?;
            as_array(v, &p)?.into_iter().map(|(x, q)| parse_subgroup(g, x, &q)).collect::<Result<_>>()?
        }
        None => Vec::new(),
    };
    let target_subgroups = match root.get("target_subgroups") {
        Some((v, p)) => {
            let tg = target
                .as_ref()
                .and_then(|t| t.space.group())
                .ok_or_else(|| err(&p, "needs a cayley target"))?;
            as_array(v, &p)?.into_iter().map(|(x, q)| parse_subgroup(tg, x, &q)).collect::<Result<_>>()?
        }
        None => Vec::new(),
    };
    let elements = match root.get("elements") {
        Some((v, p)) => {
            let g = need_group(&p)?;
            Some(match v {
                Value::Object(_) => {
                    let o = Obj::new(Node { v, ptr: &p }, &["ball"])?;
                    let (b, bp) = o.req("ball")?;
                    ElementList::Ball(as_u32(b, &bp)?)
                }
                _ => ElementList::Listed(
                    as_array(v, &p)?.into_iter().map(|(x, q)| parse_element(g, x, &q)).collect::<Result<_>>()?,
                ),
            })
        }
        None => None,
    };
    let finite_index = match root.get("finite_index") {
        Some((v, p)) => Some(parse_subgroup(need_group(&p)?, v, &p)?),
        None => None,
    };
    let thicken = match root.get("thicken") {
        Some((v, p)) => {
            let r = as_f64(v, &p)?;
            if r < 0.0 {
                return Err(err(&p, "thickening radius must be non-negative"));
            }
            Some(r)
        }
        None => None,
    };
    let census = match root.get("census") {
        Some((v, p)) => v.as_bool().ok_or_else(|| err(&p, "expected a boolean"))?,
        None => false,
    };
    Ok(Description {
        id,
        description,
        command,
        space,
        subset,
        other,
        grids,
        target,
        map,
        subgroups,
        target_subgroups,
        elements,
        finite_index,
        thicken,
        census,
    })
}

fn space_kind_name(space: &SpaceSpec) -> &'static str {
    match space {
        SpaceSpec::Cayley { .. } => "cayley",
        SpaceSpec::SampledLines { .. } => "sampled-lines",
        SpaceSpec::ProductRow { .. } => "product-row",
        SpaceSpec::Explicit { .. } => "explicit",
    }
}

fn parse_space_block(obj: &Obj) -> Result<SpaceSpec> {
    let (kind, kp) = obj.req("space")?;
    let kind = as_str(kind, &kp)?;
    if !SPACE_KINDS.contains(&kind) {
        return Err(err(&kp, format!("unknown space kind {kind:?}")));
    }
    let (block, bp) = obj.req(kind)?;
    let node = Node { v: block, ptr: &bp };
    match kind {
        "cayley" => {
            let o = Obj::new(node, &["group", "R"])?;
            let (g, gp) = o.req("group")?;
            let (r, rp) = o.req("R")?;
            Ok(SpaceSpec::Cayley { group: parse_group(g, &gp)?, radius: as_u32(r, &rp)? })
        }
        "sampled-lines" => {
            let o = Obj::new(node, &["segments", "preset", "extent", "step", "center", "R", "metric"])?;
            let layout = match (o.get("segments"), o.get("preset")) {
                (Some((v, p)), None) => LinesLayout::Segments(
                    as_array(v, &p)?
                        .into_iter()
                        .map(|(s, sp)| {
                            let ends = as_array(s, &sp)?;
                            if ends.len() != 2 {
                                return Err(err(&sp, "a segment is [[x1, y1], [x2, y2]]"));
                            }
                            Ok([point2(ends[0].0, &ends[0].1)?, point2(ends[1].0, &ends[1].1)?])
                        })
                        .collect::<Result<_>>()?,
                ),
                (None, Some((v, p))) => match as_str(v, &p)? {
                    "hash" => {
                        let (e, ep) = o.req("extent")?;
                        LinesLayout::Hash { extent: as_f64(e, &ep)? }
                    }
                    "plane" => LinesLayout::Plane,
                    other => return Err(err(&p, format!("unknown preset {other:?}"))),
                },
                _ => return Err(err(&bp, "give exactly one of \"segments\" and \"preset\"")),
            };
            if o.get("extent").is_some() && !matches!(layout, LinesLayout::Hash { .. }) {
                return Err(err(&o.path("extent"), "only used by the hash preset"));
            }
            let (s, sp) = o.req("step")?;
            let step = as_f64(s, &sp)?;
            if step <= 0.0 {
                return Err(err(&sp, "step must be positive"));
            }
            let (r, rp) = o.req("R")?;
            let center = match o.get("center") {
                Some((v, p)) => point2(v, &p)?,
                None => [0.0, 0.0],
            };
            let manhattan = match o.get("metric") {
                Some((v, p)) => match as_str(v, &p)? {
                    "euclidean" => false,
                    "manhattan" => true,
                    other => return Err(err(&p, format!("unknown metric {other:?}"))),
                },
                None => false,
            };
            Ok(SpaceSpec::SampledLines { layout, step, center, radius: as_f64(r, &rp)?, manhattan })
        }
        "product-row" => {
            let o = Obj::new(node, &["m", "step", "R"])?;
            let (m, mp) = o.req("m")?;
            let (s, sp) = o.req("step")?;
            let (r, rp) = o.req("R")?;
            Ok(SpaceSpec::ProductRow { m: as_i64(m, &mp)?, step: as_f64(s, &sp)?, radius: as_f64(r, &rp)? })
        }
        _ => {
            let o = Obj::new(node, &["distances", "basepoint", "R"])?;
            let (d, dp) = o.req("distances")?;
            let distances =
                as_array(d, &dp)?.into_iter().map(|(row, p)| f64_list(row, &p)).collect::<Result<_>>()?;
            let basepoint = match o.get("basepoint") {
                Some((v, p)) => as_usize(v, &p)?,
                None => 0,
            };
            let (r, rp) = o.req("R")?;
            Ok(SpaceSpec::Explicit { distances, basepoint, radius: as_f64(r, &rp)? })
        }
    }
}

fn parse_group(v: &Value, ptr: &str) -> Result<Group> {
    let o = Obj::new(Node { v, ptr }, &["kind", "rank", "generators", "factors"])?;
    let (k, kp) = o.req("kind")?;
    let kind = as_str(k, &kp)?;
    let rank = || -> Result<usize> {
        let (r, rp) = o.req("rank")?;
        let r = as_usize(r, &rp)?;
        if r == 0 || r > 26 {
            return Err(err(&rp, "rank must be between 1 and 26"));
        }
        Ok(r)
    };
    let factors = || -> Result<Vec<Group>> {
        let (f, fp) = o.req("factors")?;
        let fs: Vec<Group> = as_array(f, &fp)?.into_iter().map(|(x, p)| parse_group(x, &p)).collect::<Result<_>>()?;
        if fs.is_empty() {
            return Err(err(&fp, "need at least one factor"));
        }
        Ok(fs)
    };
    let only = |allowed: &[&str]| -> Result<()> {
        for key in o.map.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(err(&o.path(key), format!("not used by {kind} groups")));
            }
        }
        Ok(())
    };
    match kind {
        "free-abelian" => {
            only(&["kind", "rank", "generators"])?;
            let n = rank()?;
            match o.get("generators") {
                Some((g, gp)) => {
                    let gens: Vec<Vec<i64>> = as_array(g, &gp)?
                        .into_iter()
                        .map(|(x, p)| as_array(x, &p)?.into_iter().map(|(y, q)| as_i64(y, &q)).collect())
                        .collect::<Result<_>>()?;
                    Group::free_abelian_with_generators(n, &gens).map_err(|e| err(&gp, e.to_string()))
                }
                None => Ok(Group::free_abelian(n)),
            }
        }
        "free" => {
            only(&["kind", "rank"])?;
            Ok(Group::free(rank()?))
        }
        "direct-product" => {
            only(&["kind", "factors"])?;
            Ok(Group::direct_product(factors()?))
        }
        "free-product" => {
            only(&["kind", "factors"])?;
            Ok(Group::free_product(factors()?))
        }
        other => Err(err(&kp, format!("unknown group kind {other:?}"))),
    }
}

/// Parses an element in the JSON vocabulary of `group`.
pub fn parse_element(group: &Group, v: &Value, ptr: &str) -> Result<Element> {
    let e = match group.kind() {
        GroupKind::FreeAbelian { rank } => {
            let xs: Vec<i64> = as_array(v, ptr)?.into_iter().map(|(x, p)| as_i64(x, &p)).collect::<Result<_>>()?;
            if xs.len() != *rank {
                return Err(err(ptr, format!("expected {rank} coordinates")));
            }
            Element::Vector(xs)
        }
        GroupKind::Free { rank } => parse_word(as_str(v, ptr)?, *rank).map_err(|e| err(ptr, e.to_string()))?,
        GroupKind::DirectProduct(fs) => {
            let parts = as_array(v, ptr)?;
            if parts.len() != fs.len() {
                return Err(err(ptr, format!("expected {} components", fs.len())));
            }
            Element::Tuple(
                fs.iter().zip(parts).map(|(f, (x, p))| parse_element(f, x, &p)).collect::<Result<_>>()?,
            )
        }
        GroupKind::FreeProduct(fs) => {
            let mut acc = group.identity();
            for (syl, p) in as_array(v, ptr)? {
                let pair = as_array(syl, &p)?;
                if pair.len() != 2 {
                    return Err(err(&p, "a syllable is [factor, element]"));
                }
                let i = as_usize(pair[0].0, &pair[0].1)?;
                let f = fs.get(i).ok_or_else(|| err(&pair[0].1, "no such factor"))?;
                let e = parse_element(f, pair[1].0, &pair[1].1)?;
                if !f.is_identity(&e) {
                    acc = group.multiply(&acc, &Element::Syllables(vec![(i, e)]));
                }
            }
            acc
        }
    };
    group.validate(&e).map_err(|x| err(ptr, x.to_string()))?;
    Ok(e)
}

/// Parses a subgroup: `"trivial"`, `"whole"`, or an object with one of
/// `generated`, `product`, `factor`, `conjugate`, `intersection`, `kernel`.
pub fn parse_subgroup(group: &Group, v: &Value, ptr: &str) -> Result<SubgroupSpec> {
    if let Some(s) = v.as_str() {
        return match s {
            "trivial" => Ok(SubgroupSpec::Trivial),
            "whole" => Ok(SubgroupSpec::Whole),
            other => Err(err(ptr, format!("unknown subgroup {other:?}"))),
        };
    }
    let o = Obj::new(
        Node { v, ptr },
        &["generated", "product", "factor", "subgroup", "conjugate", "intersection", "kernel"],
    )?;
    let keys: Vec<&str> = o.map.keys().map(String::as_str).collect();
    match keys.as_slice() {
        ["generated"] => {
            let (g, gp) = o.req("generated")?;
            Ok(SubgroupSpec::Generated(
                as_array(g, &gp)?.into_iter().map(|(x, p)| parse_element(group, x, &p)).collect::<Result<_>>()?,
            ))
        }
        ["product"] => {
            let GroupKind::DirectProduct(fs) = group.kind() else {
                return Err(err(ptr, "product subgroups need a direct product"));
            };
            let (g, gp) = o.req("product")?;
            let parts = as_array(g, &gp)?;
            if parts.len() != fs.len() {
                return Err(err(&gp, format!("expected {} factors", fs.len())));
            }
            Ok(SubgroupSpec::Product(
                fs.iter().zip(parts).map(|(f, (x, p))| parse_subgroup(f, x, &p)).collect::<Result<_>>()?,
            ))
        }
        _ if keys.len() == 2 && keys.contains(&"factor") && keys.contains(&"subgroup") => {
            let GroupKind::FreeProduct(fs) = group.kind() else {
                return Err(err(ptr, "factor subgroups need a free product"));
            };
            let (f, fp) = o.req("factor")?;
            let i = as_usize(f, &fp)?;
            let fg = fs.get(i).ok_or_else(|| err(&fp, "no such factor"))?;
            let (s, sp) = o.req("subgroup")?;
            Ok(SubgroupSpec::Factor { factor: i, inner: Box::new(parse_subgroup(fg, s, &sp)?) })
        }
        _ if keys.len() == 2 && keys.contains(&"conjugate") && keys.contains(&"subgroup") => {
            let (c, cp) = o.req("conjugate")?;
            let (s, sp) = o.req("subgroup")?;
            Ok(SubgroupSpec::Conjugate {
                by: parse_element(group, c, &cp)?,
                inner: Box::new(parse_subgroup(group, s, &sp)?),
            })
        }
        ["intersection"] => {
            let (g, gp) = o.req("intersection")?;
            Ok(SubgroupSpec::Intersection(
                as_array(g, &gp)?.into_iter().map(|(x, p)| parse_subgroup(group, x, &p)).collect::<Result<_>>()?,
            ))
        }
        ["kernel"] => {
            let (k, kp) = o.req("kernel")?;
            let ko = Obj::new(Node { v: k, ptr: &kp }, &["moduli", "images"])?;
            let (m, mp) = ko.req("moduli")?;
            let (im, ip) = ko.req("images")?;
            let moduli: Vec<i64> = as_array(m, &mp)?.into_iter().map(|(x, p)| as_i64(x, &p)).collect::<Result<_>>()?;
            let images: Vec<Vec<i64>> = as_array(im, &ip)?
                .into_iter()
                .map(|(row, p)| as_array(row, &p)?.into_iter().map(|(x, q)| as_i64(x, &q)).collect())
                .collect::<Result<_>>()?;
            Ok(SubgroupSpec::Kernel(Character { moduli, images }))
        }
        _ => Err(err(ptr, "a subgroup object needs exactly one form")),
    }
}

fn parse_subset(space: &SpaceSpec, v: &Value, ptr: &str) -> Result<Subset> {
    if v.as_str() == Some("basepoint") {
        return Ok(match space {
            SpaceSpec::Cayley { .. } => Subset::Group(SubsetSpec::Basepoint),
            _ => Subset::Basepoint,
        });
    }
    match space {
        SpaceSpec::Cayley { group, .. } => {
            let o = Obj::new(Node { v, ptr }, &["subgroup", "coset", "explicit", "predicate"])?;
            let keys: Vec<&str> = o.map.keys().map(String::as_str).collect();
            let spec = match keys.as_slice() {
                ["subgroup"] => {
                    let (s, sp) = o.req("subgroup")?;
                    SubsetSpec::Subgroup(parse_subgroup(group, s, &sp)?)
                }
                _ if keys.len() == 2 && keys.contains(&"coset") && keys.contains(&"subgroup") => {
                    let (c, cp) = o.req("coset")?;
                    let (s, sp) = o.req("subgroup")?;
                    SubsetSpec::Coset { element: parse_element(group, c, &cp)?, subgroup: parse_subgroup(group, s, &sp)? }
                }
                ["explicit"] => {
                    let (e, ep) = o.req("explicit")?;
                    SubsetSpec::Explicit(
                        as_array(e, &ep)?.into_iter().map(|(x, p)| parse_element(group, x, &p)).collect::<Result<_>>()?,
                    )
                }
                ["predicate"] => {
                    let (p, pp) = o.req("predicate")?;
                    SubsetSpec::Predicate(as_str(p, &pp)?.to_string())
                }
                _ => return Err(err(ptr, "a subset needs exactly one form")),
            };
            Ok(Subset::Group(spec))
        }
        SpaceSpec::Explicit { .. } => {
            let o = Obj::new(Node { v, ptr }, &["explicit"])?;
            let (e, ep) = o.req("explicit")?;
            Ok(Subset::Indices(as_array(e, &ep)?.into_iter().map(|(x, p)| as_usize(x, &p)).collect::<Result<_>>()?))
        }
        _ => {
            let o = Obj::new(Node { v, ptr }, &["explicit", "predicate"])?;
            if let Some((p, pp)) = o.get("predicate") {
                let name = as_str(p, &pp)?;
                if !["x-axis", "y-axis"].contains(&name) {
                    return Err(err(&pp, format!("unknown predicate {name:?}")));
                }
                return Ok(Subset::Predicate(name.to_string()));
            }
            let (e, ep) = o.req("explicit")?;
            Ok(Subset::Coords(as_array(e, &ep)?.into_iter().map(|(x, p)| f64_list(x, &p)).collect::<Result<_>>()?))
        }
    }
}

fn parse_grids(v: &Value, ptr: &str) -> Result<Grids> {
    let o = Obj::new(Node { v, ptr }, &["sigma", "mu", "R", "M", "W", "n_max", "margin", "depth_fraction"])?;
    let mut g = Grids::default();
    if let Some((x, p)) = o.get("sigma") {
        g.sigma = f64_list(x, &p)?;
    }
    if let Some((x, p)) = o.get("mu") {
        g.mu = f64_list(x, &p)?;
    }
    if let Some((x, p)) = o.get("R") {
        g.radii = as_array(x, &p)?.into_iter().map(|(y, q)| as_u32(y, &q)).collect::<Result<_>>()?;
    }
    if let Some((x, p)) = o.get("M") {
        g.m = f64_list(x, &p)?;
    }
    if let Some((x, p)) = o.get("W") {
        g.window = as_usize(x, &p)?;
        if g.window == 0 {
            return Err(err(&p, "W must be at least 1"));
        }
    }
    if let Some((x, p)) = o.get("n_max") {
        g.n_max = as_usize(x, &p)?;
    }
    if let Some((x, p)) = o.get("margin") {
        g.margin = Some(as_f64(x, &p)?);
    }
    if let Some((x, p)) = o.get("depth_fraction") {
        g.depth_fraction = as_f64(x, &p)?;
    }
    Ok(g)
}

fn parse_target(v: &Value, ptr: &str) -> Result<Target> {
    let o = Obj::new(Node { v, ptr }, &["space", "cayley", "sampled-lines", "product-row", "explicit", "subset"])?;
    let space = parse_space_block(&o)?;
    let subset = o.get("subset").map(|(s, p)| parse_subset(&space, s, &p)).transpose()?;
    Ok(Target { space, subset })
}

fn parse_map(space: &SpaceSpec, v: &Value, ptr: &str) -> Result<MapSpec> {
    if let Some(s) = v.as_str() {
        return match s {
            "identity" => Ok(MapSpec::Identity),
            "swap" => Ok(MapSpec::Swap),
            other => Err(err(ptr, format!("unknown map {other:?}"))),
        };
    }
    let o = Obj::new(Node { v, ptr }, &["translate"])?;
    let (t, tp) = o.req("translate")?;
    let group = space.group().ok_or_else(|| err(ptr, "translations need a cayley space"))?;
    Ok(MapSpec::Translate(parse_element(group, t, &tp)?))
}
