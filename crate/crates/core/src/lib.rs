//! Capacity regions of the restricted two-way relay channel with a
//! deterministic uplink, and a random-coding simulation of the scheme that
//! achieves them.
//!
//! - [`prob`]: pmfs, entropies, simplex grids, seeded randomness
//! - [`channel`]: uplink tables, downlink channels, spec files, built-ins
//! - [`region`]: rate regions, their intersection and certificates
//! - [`sim`]: Monte Carlo error estimates for the coding scheme
//! - [`cli`]: the `twrc` command line

pub mod channel;
pub mod prob;
pub mod region;
pub mod sim;
pub mod cli;
