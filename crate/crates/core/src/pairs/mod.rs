//! Coset families, quasi-isometry-of-pairs checks, approximate stabilizers
//! and related probes.

pub mod cosets;
pub mod finite_index;
pub mod probes;
pub mod qi;
pub mod stabilizer;

pub use cosets::{enumerate_cosets, PairFamily, VisibleCoset};
pub use finite_index::{induce_finite_index_collection, FiniteIndexCollection, InducedSubgroup};
pub use probes::{
    coarse_connectedness_scale, commensurator_probe, perpendicularity_bound, CommensuratorProbe,
    CommensuratorReport, CommensuratorVerdict,
};
pub use qi::{default_m_grid, pair_qi_check, PairCheckReport, QIMapSample};
pub use stabilizer::{approx_stabilizer, StabilizerResult};
