//! Coded distributed computing (CDC) on a MapReduce-style cluster.
//!
//! The crate covers the whole pipeline for a cluster of `K` servers computing
//! `Q` output functions over `N` files stored with redundancy `r`:
//!
//! * [`placement`] builds the batch placement and function assignment,
//! * [`simulator`] maps intermediate values, runs the coded (CDC) or split
//!   (S-CDC) shuffle on real bit payloads, decodes, and measures loads,
//! * [`analysis`] holds the closed-form loads and the CDC-fit scheme,
//! * [`lp`] solves the lower-bound and S-CDC programs exactly.
//!
//! Every load is an exact [`Rational`]; nothing is compared with a tolerance.

pub mod analysis;
pub mod combinatorics;
pub mod config;
pub mod lp;
pub mod placement;
pub mod rational;
pub mod simulator;

pub use combinatorics::{binomial, lcm_upto, subsets_of_size};
pub use config::{ClusterConfig, ConfigError, ValidatedConfig, Violation};
pub use placement::Placement;
pub use rational::Rational;
