//! Quantum-vacuum photon production when a dielectric bubble collapses: Bogolubov
//! kernels between the bubble and homogeneous-medium mode bases, emitted spectra, their
//! large-volume limits, static Casimir energies, adiabatic suppression and pair
//! statistics.
//!
//! Internally `ħ = c = 1` with lengths in µm; see [`units`] for conversions.

// `!(x > 0.0)` guards deliberately reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod bogolubov;
pub mod config;
pub mod error;
pub mod modes;
pub mod output;
pub mod photonstats;
pub mod quad;
pub mod run;
pub mod specfun;
pub mod spectrum;
pub mod suppression;
pub mod units;

pub use error::{Error, Result};
