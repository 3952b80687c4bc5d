use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::group::element::{Element, Group};

pub const DEFAULT_CAP: usize = 2_000_000;

/// Word distance together with whether it is the true distance in the group
/// or only the distance inside the ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WordDistance {
    pub value: u64,
    pub exact: bool,
}

/// Word-metric ball around the identity, in canonical order.
#[derive(Clone, Debug)]
pub struct Ball {
    group: Group,
    radius: u32,
    points: Vec<Element>,
    lengths: Vec<u32>,
    index: HashMap<Element, usize>,
    neighbors: Vec<Vec<usize>>,
    /// Word lengths up to `2R` for generating sets without a closed form.
    lookup: Option<HashMap<Element, u32>>,
}

impl Ball {
    pub fn build(group: &Group, radius: u32) -> Result<Self> {
        Self::build_with_cap(group, radius, DEFAULT_CAP)
    }

    pub fn build_with_cap(group: &Group, radius: u32, cap: usize) -> Result<Self> {
        if group.generators().is_empty() {
            return Err(Error::config("generating set is empty"));
        }
        let lengths = bfs_lengths(group, radius, cap)?;
        let mut order: Vec<(u32, Element)> = lengths.into_iter().map(|(e, l)| (l, e)).collect();
        order.sort();
        let lengths: Vec<u32> = order.iter().map(|(l, _)| *l).collect();
        let points: Vec<Element> = order.into_iter().map(|(_, e)| e).collect();
        let index: HashMap<Element, usize> =
            points.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let neighbors = points
            .iter()
            .map(|p| {
                let mut ns: Vec<usize> = group
                    .generators()
                    .iter()
                    .filter_map(|s| index.get(&group.multiply(p, s)).copied())
                    .collect();
                ns.sort_unstable();
                ns.dedup();
                ns
            })
            .collect();
        let lookup = if group.has_closed_form_length() {
            None
        } else {
            bfs_lengths(group, radius.saturating_mul(2), cap).ok()
        };
        Ok(Ball {
            group: group.clone(),
            radius,
            points,
            lengths,
            index,
            neighbors,
            lookup,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Element] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Element {
        &self.points[i]
    }

    /// Word length of point `i`.
    pub fn length(&self, i: usize) -> u32 {
        self.lengths[i]
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Number of points per word length, starting at 0.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.radius as usize + 1];
        for &l in &self.lengths {
            out[l as usize] += 1;
        }
        out
    }

    /// Number of points of length at most `k` (a prefix of the point list).
    pub fn prefix_len(&self, k: u32) -> usize {
        self.lengths.partition_point(|&l| l <= k)
    }

    /// Distance between two ball points.
    pub fn distance(&self, i: usize, j: usize) -> WordDistance {
        if i == j {
            return WordDistance { value: 0, exact: true };
        }
        let (p, q) = (&self.points[i], &self.points[j]);
        if let Some(d) = self.group.closed_form_distance(p, q) {
            return WordDistance { value: d, exact: true };
        }
        let w = self.group.left_quotient(p, q);
        if let Some(k) = self.index_of(&w) {
            return WordDistance { value: self.lengths[k] as u64, exact: true };
        }
        if let Some(l) = self.lookup.as_ref().and_then(|m| m.get(&w)) {
            return WordDistance { value: *l as u64, exact: true };
        }
        WordDistance {
            value: self.inner_bfs(i, j),
            exact: false,
        }
    }

    pub fn word_distance(&self, p: &Element, q: &Element) -> Result<WordDistance> {
        let i = self
            .index_of(p)
            .ok_or_else(|| Error::domain(format!("{} is outside the ball", self.group.format(p))))?;
        let j = self
            .index_of(q)
            .ok_or_else(|| Error::domain(format!("{} is outside the ball", self.group.format(q))))?;
        Ok(self.distance(i, j))
    }

    fn inner_bfs(&self, from: usize, to: usize) -> u64 {
        let mut dist = vec![u64::MAX; self.len()];
        let mut queue = VecDeque::from([from]);
        dist[from] = 0;
        while let Some(v) = queue.pop_front() {
            if v == to {
                return dist[v];
            }
            for &u in &self.neighbors[v] {
                if dist[u] == u64::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        u64::MAX
    }
}

fn bfs_lengths(group: &Group, radius: u32, cap: usize) -> Result<HashMap<Element, u32>> {
    let id = group.identity();
    let mut seen: HashMap<Element, u32> = HashMap::from([(id.clone(), 0)]);
    let mut frontier = vec![id];
    for layer in 1..=radius {
        let mut next = Vec::new();
        for p in &frontier {
            for s in group.generators() {
                let q = group.multiply(p, s);
                if !seen.contains_key(&q) {
                    seen.insert(q.clone(), layer);
                    if seen.len() > cap {
                        return Err(Error::Capacity { cap });
                    }
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    Ok(seen)
}
