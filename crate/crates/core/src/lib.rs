//! Multi-objective particle swarm optimization over boolean and binary
//! search spaces.
//!
//! The crate provides six swarm update rules (two velocity-free, four
//! velocity-based), Pareto archives with crowding-distance leader
//! selection, the Schaffer N.1 and ZDT benchmark problems, hypervolume /
//! generational-distance / NoP indicators and a batch experiment harness.

pub mod algorithms;
pub mod archive;
pub mod bitcore;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod objectives;

pub use error::{Error, Result};
