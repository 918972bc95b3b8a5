//! Vehicular behavior-aware joint radar sensing and uplink communication
//! beamforming.
//!
//! The pipeline runs from vehicle kinematics to transmit beamformers:
//!
//! 1. [`kinematics`] predicts the short-horizon path and the area of interest.
//! 2. [`array`] turns the area of interest into pointing angles, subarray
//!    sizes and the block-diagonal radar beamformer.
//! 3. [`channel`] draws mmWave channels and their SVD-optimal precoder.
//! 4. [`fd`] solves the full-digital trade-off problem by semidefinite
//!    relaxation (backed by the [`sdp`] interior-point solver) and by an exact
//!    closed form.
//! 5. [`hybrid`] factors the precoder into unit-modulus analog and digital
//!    parts by alternating minimization, with the analog step on the
//!    complex circle manifold ([`manifold`]).
//! 6. [`metrics`] scores spectral efficiency, energy efficiency and
//!    beampattern fidelity; [`harness`] runs the sweep experiments.

pub mod array;
pub mod channel;
pub mod error;
pub mod fd;
pub mod harness;
pub mod hybrid;
pub mod kinematics;
pub mod linalg;
pub mod manifold;
pub mod metrics;
pub mod sdp;
pub mod seeding;

pub use error::{Error, Result};
