//! Experiment descriptions, the built-in catalog and report emission.

pub mod catalog;
pub mod report;
pub mod runner;
pub mod schema;

pub use catalog::{catalog, catalog_entry, CatalogEntry};
pub use report::{Report, ReportRow};
pub use runner::{build_space, resolve_subset, run, run_default, RunOptions};
pub use schema::{parse_description, Command, Description};
