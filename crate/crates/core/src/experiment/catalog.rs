//! Built-in descriptions for the worked examples.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::experiment::schema::{parse_description, Description};

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub document: Value,
}

impl CatalogEntry {
    pub fn description(&self) -> Result<Description> {
        parse_description(&self.document)
    }

    pub fn title(&self) -> &str {
        self.document["description"].as_str().unwrap_or("")
    }
}

fn z2() -> Value {
    json!({"kind": "free-abelian", "rank": 2})
}

fn f2() -> Value {
    json!({"kind": "free", "rank": 2})
}

fn range(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(f64::from).collect()
}

fn entries() -> Vec<(&'static str, Value)> {
    vec![
        ("z2-axis", json!({
            "id": "z2-axis",
            "description": "Z^2 with the standard generators, C the x-axis",
            "command": "filtered-ends",
            "space": "cayley",
            "cayley": {"group": z2(), "R": 30},
            "subset": {"predicate": "x-axis"},
            "grids": {"sigma": [1, 2, 3], "mu": range(1, 15)}
        })),
        ("z2-axis-fine", json!({
            "id": "z2-axis-fine",
            "description": "Z^2 and the x-axis below the lattice spacing",
            "command": "filtered-ends",
            "space": "cayley",
            "cayley": {"group": z2(), "R": 30},
            "subset": {"predicate": "x-axis"},
            "grids": {"sigma": [0.5], "mu": range(1, 15)}
        })),
        ("hash-lines", json!({
            "id": "hash-lines",
            "description": "Four lines in a # pattern, C the crossing at the origin",
            "command": "filtered-ends",
            "space": "sampled-lines",
            "sampled-lines": {"preset": "hash", "extent": 50, "step": 0.25, "R": 50},
            "subset": "basepoint",
            "grids": {"sigma": [0.5, 1.5, 2.5], "mu": range(1, 25)}
        })),
        ("plane-line", json!({
            "id": "plane-line",
            "description": "Sampled Euclidean disc, C a line through the centre",
            "command": "filtered-ends",
            "space": "sampled-lines",
            "sampled-lines": {"preset": "plane", "step": 0.25, "R": 12},
            "subset": {"predicate": "x-axis"},
            "grids": {"sigma": [0.25, 0.5, 1], "mu": range(1, 6)}
        })),
        ("product-row", json!({
            "id": "product-row",
            "description": "Product-row space with m = 3: unbounded components of the whole space",
            "command": "filtered-ends",
            "space": "product-row",
            "product-row": {"m": 3, "step": 0.25, "R": 30},
            "census": true,
            "grids": {"sigma": [0.5, 2, 3]}
        })),
        ("z-basepoint", json!({
            "id": "z-basepoint",
            "description": "Ends of Z",
            "command": "ends",
            "space": "cayley",
            "cayley": {"group": {"kind": "free-abelian", "rank": 1}, "R": 30}
        })),
        ("z2-basepoint", json!({
            "id": "z2-basepoint",
            "description": "Ends of Z^2",
            "command": "ends",
            "space": "cayley",
            "cayley": {"group": z2(), "R": 30}
        })),
        ("free2-basepoint", json!({
            "id": "free2-basepoint",
            "description": "Ends of the free group of rank two",
            "command": "ends",
            "space": "cayley",
            "cayley": {"group": f2(), "R": 9}
        })),
        ("free2-axis", json!({
            "id": "free2-axis",
            "description": "Free group of rank two relative to the cyclic subgroup <a>",
            "command": "filtered-ends",
            "space": "cayley",
            "cayley": {"group": f2(), "R": 8},
            "subset": {"subgroup": {"generated": ["a"]}},
            "grids": {"sigma": [1], "mu": [1, 2, 3]}
        })),
        ("z2-two-gensets", json!({
            "id": "z2-two-gensets",
            "description": "Z^2 and the x-axis under standard and standard-plus-diagonal generators",
            "command": "filtered-ends",
            "space": "cayley",
            "cayley": {"group": z2(), "R": 30},
            "subset": {"predicate": "x-axis"},
            "target": {
                "space": "cayley",
                "cayley": {"group": {"kind": "free-abelian", "rank": 2, "generators": [[1, 0], [0, 1], [1, 1]]}, "R": 30},
                "subset": {"predicate": "x-axis"}
            },
            "map": "identity",
            "grids": {"sigma": [1, 1.5], "mu": range(1, 15)}
        })),
        ("z2-finite-index", json!({
            "id": "z2-finite-index",
            "description": "Cosets of the x-axis restricted to the index-two subgroup 2Z x Z",
            "command": "pair-check",
            "space": "cayley",
            "cayley": {"group": z2(), "R": 10},
            "subgroups": [{"generated": [[1, 0]]}],
            "finite_index": {"generated": [[2, 0], [0, 1]]}
        })),
        ("z2-pair-identity", json!({
            "id": "z2-pair-identity",
            "description": "Horizontal lines of Z^2 matched to themselves by the identity",
            "command": "pair-check",
            "space": "cayley",
            "cayley": {"group": z2(), "R": 12},
            "subgroups": [{"generated": [[1, 0]]}],
            "map": "identity"
        })),
        ("z2-stabilizer", json!({
            "id": "z2-stabilizer",
            "description": "Elements of Z^2 moving the x-axis by at most 3",
            "command": "stabilizer",
            "space": "cayley",
            "cayley": {"group": z2(), "R": 12},
            "subset": {"predicate": "x-axis"},
            "grids": {"M": [3]}
        })),
        ("z2-hausdorff", json!({
            "id": "z2-hausdorff",
            "description": "Hausdorff distance between two parallel lines of Z^2",
            "command": "hausdorff",
            "space": "cayley",
            "cayley": {"group": z2(), "R": 8},
            "subset": {"subgroup": {"generated": [[1, 0]]}},
            "other": {"coset": [0, 3], "subgroup": {"generated": [[1, 0]]}},
            "grids": {"R": [4, 6, 8]}
        })),
        ("free2-hausdorff", json!({
            "id": "free2-hausdorff",
            "description": "Hausdorff distance between <a> and b<a> in the free group",
            "command": "hausdorff",
            "space": "cayley",
            "cayley": {"group": f2(), "R": 8},
            "subset": {"subgroup": {"generated": ["a"]}},
            "other": {"coset": "b", "subgroup": {"generated": ["a"]}},
            "grids": {"R": [4, 6, 8]}
        })),
        ("free2-commensurator", json!({
            "id": "free2-commensurator",
            "description": "Commensurator probes of <a> in the free group for all |g| <= 2",
            "command": "commensurator",
            "space": "cayley",
            "cayley": {"group": f2(), "R": 10},
            "subgroups": [{"generated": ["a"]}],
            "elements": {"ball": 2},
            "grids": {"R": [4, 6, 8, 10]}
        })),
    ]
}

/// All built-in descriptions in a fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    entries().into_iter().map(|(id, document)| CatalogEntry { id, document }).collect()
}

pub fn catalog_entry(id: &str) -> Result<CatalogEntry> {
    catalog()
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::config(format!("no catalog entry {id:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_parse_with_matching_ids() {
        let all = catalog();
        assert!(all.len() >= 10);
        for e in &all {
            let d = e.description().unwrap();
            assert_eq!(d.id, e.id);
            assert!(!e.title().is_empty());
        }
    }

    #[test]
    fn unknown_id() {
        assert!(matches!(catalog_entry("nope"), Err(Error::Config(_))));
    }
}
