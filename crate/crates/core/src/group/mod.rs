//! Finitely generated groups in normal form, word-metric balls and subgroup
//! traces.

pub mod ball;
pub mod element;
pub mod folded;
pub mod lattice;
pub mod subgroup;

pub use ball::{Ball, WordDistance, DEFAULT_CAP};
pub use element::{parse_word, Element, Group, GroupKind, Letter};
pub use subgroup::{trace_subset, Character, CosetKey, Subgroup, SubgroupSpec, SubsetSpec};
