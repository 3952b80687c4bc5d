//! Folded graphs for finitely generated subgroups of free groups.

use std::collections::HashMap;

use crate::group::element::Letter;

/// Deterministic labelled graph with base vertex 0. A reduced word lies in
/// the subgroup iff it reads a closed loop at the base.
#[derive(Clone, Debug, PartialEq)]
pub struct FoldedGraph {
    /// `(vertex, positive letter) -> vertex`
    forward: HashMap<(usize, Letter), usize>,
    /// `(vertex, positive letter) -> vertex` along reversed edges
    backward: HashMap<(usize, Letter), usize>,
    vertices: usize,
}

impl FoldedGraph {
    pub fn new(generators: &[Vec<Letter>]) -> Self {
        let mut edges: Vec<(usize, Letter, usize)> = Vec::new();
        let mut next = 1usize;
        for w in generators.iter().filter(|w| !w.is_empty()) {
            let mut cur = 0;
            for (i, &l) in w.iter().enumerate() {
                let to = if i + 1 == w.len() {
                    0
                } else {
                    next += 1;
                    next - 1
                };
                if l > 0 {
                    edges.push((cur, l, to));
                } else {
                    edges.push((to, -l, cur));
                }
                cur = to;
            }
        }
        let mut parent: Vec<usize> = (0..next).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        loop {
            let mut changed = false;
            let mut fwd: HashMap<(usize, Letter), usize> = HashMap::new();
            let mut bwd: HashMap<(usize, Letter), usize> = HashMap::new();
            for &(u, l, v) in &edges {
                let (u, v) = (find(&mut parent, u), find(&mut parent, v));
                for (map, key, val) in [(&mut fwd, (u, l), v), (&mut bwd, (v, l), u)] {
                    match map.get(&key) {
                        Some(&other) => {
                            let (a, b) = (find(&mut parent, other), find(&mut parent, val));
                            if a != b {
                                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                                parent[hi] = lo;
                                changed = true;
                            }
                        }
                        None => {
                            map.insert(key, val);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        // Renumber surviving vertices densely, keeping the base at 0.
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let mut forward = HashMap::new();
        let mut backward = HashMap::new();
        ids.insert(find(&mut parent, 0), 0);
        let fresh = |x: usize, ids: &mut HashMap<usize, usize>| -> usize {
            let n = ids.len();
            *ids.entry(x).or_insert(n)
        };
        for &(u, l, v) in &edges {
            let u = find(&mut parent, u);
            let v = find(&mut parent, v);
            let u = fresh(u, &mut ids);
            let v = fresh(v, &mut ids);
            forward.insert((u, l), v);
            backward.insert((v, l), u);
        }
        FoldedGraph {
            forward,
            backward,
            vertices: ids.len(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    fn step(&self, v: usize, l: Letter) -> Option<usize> {
        if l > 0 {
            self.forward.get(&(v, l)).copied()
        } else {
            self.backward.get(&(v, -l)).copied()
        }
    }

    /// Reads as much of `word` as possible from the base vertex. Returns the
    /// vertex reached and the number of letters consumed.
    pub fn read(&self, word: &[Letter]) -> (usize, usize) {
        let mut v = 0;
        for (i, &l) in word.iter().enumerate() {
            match self.step(v, l) {
                Some(u) => v = u,
                None => return (v, i),
            }
        }
        (v, word.len())
    }

    pub fn contains(&self, word: &[Letter]) -> bool {
        self.read(word) == (0, word.len())
    }

    /// Whether every vertex has all `2·rank` outgoing labels, i.e. the
    /// subgroup has finite index.
    pub fn is_covering(&self, rank: usize) -> bool {
        (0..self.vertices).all(|v| {
            (1..=rank as Letter).all(|l| self.step(v, l).is_some() && self.step(v, -l).is_some())
        })
    }
}
