//! Simulation-to-detection toolkit for satellite proximity threats.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`orbital`] samples attacker/target orbits per regime and behavior class,
//!    propagates them with two-body Kepler motion and applies one impulsive burn.
//! 2. [`relmotion`] projects the attacker into the target's RTN frame and
//!    derives per-timestep kinematic features; [`rflink`] models the uplink and
//!    the bursty jammer and produces the RF observables.
//! 3. [`scenario`] ties both together into labeled scenarios and writes CSV
//!    shards plus a manifest; [`features`] turns those into the RF-only,
//!    kinematic-only and fused feature views.
//! 4. [`learn`] trains the random forest and computes the evaluation metrics;
//!    [`experiments`] wires the ablation and the estimation-noise sweep.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiments;
pub mod features;
pub mod learn;
pub mod orbital;
pub mod relmotion;
pub mod rflink;
pub mod rng;
pub mod scenario;

pub use error::{Error, Result};

/// Inertial 3-vector used throughout (meters, m/s, or unit directions).
pub type Vec3 = nalgebra::Vector3<f64>;
