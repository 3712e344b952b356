//! Executable filter games on ω: periodic set algebra, computable filters,
//! bounded plays with prefix certificates, explicit strategies and their
//! transformations, filter trees, and bounded witness checkers.

pub mod filters;
pub mod games;
pub mod setkit;
pub mod strategies;
pub mod transforms;
pub mod trees;
pub mod witnesses;

pub use setkit::{CardClass, GridSet, SetError, Subset, UpSet};
pub use filters::{Depth, FilterError, FilterSpec, Region};
