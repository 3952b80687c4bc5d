//! Filtered ends of pairs `(X, C)` on finite truncations of Cayley graphs and
//! sampled metric spaces, with the coarse-geometry toolkit around them.

pub mod ends;
pub mod error;
pub mod experiment;
pub mod group;
pub mod pairs;
pub mod space;

pub use error::{Error, Result};
