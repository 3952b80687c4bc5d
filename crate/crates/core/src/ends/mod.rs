//! Ends diagrams over μ, filtered-end verdicts, ray witnesses and induced
//! maps.

pub mod census;
pub mod diagram;
pub mod induced;
pub mod verdict;
pub mod witness;

pub use census::{classical_ends, unbounded_census, CensusRow};
pub use diagram::{
    ends_diagram, filtered_ends, CrossSigma, EndsDiagram, FilteredEndsReport, Level, SigmaVerdict,
    SpacePair,
};
pub use induced::{induced_end_map, InducedEndMap, InducedSide};
pub use verdict::{default_mu_grid, trusted, EndsConfig, Verdict};
pub use witness::{ray_witnesses, RayWitness};
