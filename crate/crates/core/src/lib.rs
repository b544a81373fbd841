//! Bicriteria scheduling, packing and allocation.
//!
//! The crate implements the `(0.6533, 3/2)` bicriteria algorithm for makespan
//! minimisation on unrelated machines, the two-phase `(1 - delta, eps)`
//! algorithm for bicriteria set packing, the CNF to set packing and set
//! packing to max-min allocation reductions, and exponential-time oracles
//! that certify every guarantee on small instances.
//!
//! All processing times and values are exact rationals. Floating point only
//! shows up in the statistics of [`experiment`].

pub mod engines;
pub mod error;
pub mod experiment;
pub mod instances;
pub mod makespan;
pub mod oracles;
pub mod par;
pub mod rational;
pub mod reductions;
pub mod setpacking;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rational;
