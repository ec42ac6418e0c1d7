//! Gaussian-channel models of microwave-optical quantum transduction.
//!
//! A piezo-optomechanical device pumped on the red sideband acts as a
//! thermal-loss conversion channel; pumped on the blue sideband it emits
//! a two-mode squeezed microwave-optical state that can drive continuous
//! variable teleportation or entanglement swapping. This crate models all
//! three in covariance-matrix form and evaluates the capacity bounds and
//! entanglement measures used to compare them.
//!
//! Conventions used everywhere: ħ = 2 (vacuum covariance is the identity)
//! and quadratures ordered `q1, p1, q2, p2, ...`.
//!
//! Module map:
//!
//! - [`gaussian`]: phase-space algebra, channels, general-dyne conditioning
//! - [`transducer`]: scattering matrices, conversion channel, MO source state
//! - [`channel`]: capacity lower bounds and bandwidth-integrated rates
//! - [`entanglement`]: entanglement of formation, Duan quantity, E_R
//! - [`teleport`]: teleportation-induced channel and gain optimization
//! - [`swapping`]: microwave-microwave swapping and click-based rates
//! - [`sweep`]: config-driven parameter sweeps, CSV and SVG output
//! - [`random`]: seeded generators of physical test inputs

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod entanglement;
mod error;
pub mod gaussian;
pub mod integrate;
pub mod random;
pub mod swapping;
pub mod sweep;
pub mod teleport;
pub mod transducer;

pub use channel::BosonicChannel;
pub use error::{Error, Result};
pub use gaussian::{GaussianChannelSpec, GaussianState, SymplecticForm};
pub use transducer::{Detuning, TransducerParams, TwoModeStandardForm};
