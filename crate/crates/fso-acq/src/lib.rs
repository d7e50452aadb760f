//! Acquisition-time analysis for photon-limited free-space optical links.
//!
//! Two terminals must point narrow beams at each other before they can
//! communicate; the initiator searches an uncertainty region for the
//! receiver, and every dwell is a Poisson photon-counting hypothesis test
//! with a small detection probability. This crate provides:
//!
//! - [`detection`]: count-threshold selection and the resulting detection /
//!   false-alarm probabilities;
//! - [`region`]: uncertainty-region geometry, the Rayleigh location law,
//!   subregion partitions, and spiral waypoint generation;
//! - [`adaptive_spiral`]: closed-form mean and complementary CDF of the
//!   acquisition time when the region is searched in nested subregions,
//!   inner (higher probability) ones more often;
//! - [`shotgun`]: the same statistics for a randomized search that fires at
//!   Gaussian-sampled aim points, plus quadrature cross-check routes;
//! - [`ga`]: a real-coded genetic algorithm that optimizes the subregion
//!   radii for either objective;
//! - [`montecarlo`]: a discrete-event simulator, independent of every closed
//!   form, used as the validation oracle;
//! - [`experiment`]: JSON-configured experiment runner with CSV/manifest
//!   outputs and figure presets (surfaced by the `fso-acq` binary).
//!
//! Start with the runnable examples (`cargo run --example ...`); each one
//! exercises a major capability end to end.

pub mod adaptive_spiral;
pub mod cli;
pub mod detection;
mod error;
pub mod experiment;
pub mod ga;
pub mod montecarlo;
pub(crate) mod numerics;
pub mod region;
pub mod shotgun;

pub use error::{Error, Result};
