//! Shattering dimensions, realizable-distribution complexes and certified
//! spherical-dimension bounds for finite binary concept classes.

pub mod bitset;
pub mod concept;
pub mod error;

pub use error::{Error, Result};
pub mod complex;
pub mod extremal;
pub mod spheres;
pub mod signrank;
pub mod disamb;
pub mod report;
pub mod io;
