//! Recovery of sparse circle maps from a single trajectory of their own
//! dynamics.
//!
//! The pipeline: represent a circle map as a sparse trigonometric polynomial
//! ([`trigpoly`]), iterate it and estimate the invariant density ([`dynamics`]),
//! assemble the underdetermined Fourier measurement system ([`sensing`]),
//! recover the coefficients with the complex Lasso ([`lasso`]), and certify
//! the recovery conditions numerically ([`spectra`]). The [`experiments`]
//! module drives seeded end-to-end identification runs, phase diagrams over
//! (M, s, sigma), and error-scaling fits.

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod lasso;
pub mod linalg;
pub mod sensing;
pub mod spectra;
pub mod trigpoly;

pub use error::{Error, Result};
