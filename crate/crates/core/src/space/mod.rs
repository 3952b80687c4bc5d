//! Finite metric spaces, σ-components and their transition maps.

pub mod finite;
pub mod hausdorff;
pub mod maps;
pub mod partition;
pub mod sampled;
pub mod union_find;

pub use finite::{CoordMetric, FiniteSpace, EPS};
pub use hausdorff::{core_hausdorff, directed_hausdorff, truncated_hausdorff};
pub use maps::{measure_distortion, Distortion, PointMap};
pub use partition::{
    alive_from_distances, complement_of_neighborhood, is_bijection, sigma_components,
    sigma_components_with_pairs, transition_map, Component, ComponentPartition, ScalePair,
    UnboundedRule,
};
pub use union_find::UnionFind;
pub use sampled::{hash_segments, product_row, sampled_lines, sampled_plane, Segment};
