//! Small-amplitude periodic traveling waves of two extended Hunter–Saxton
//! shallow-water models and their modulational stability.
//!
//! The crate is layered bottom-up:
//! - [`fourier`]: truncated trigonometric series on the torus;
//! - [`stokes`]: traveling waves, analytic and by Newton–Galerkin;
//! - [`bloch`]: Floquet–Bloch pencils and their spectra (Hill's method);
//! - [`modulation`]: projection onto the critical subspace, discriminant and verdicts;
//! - [`series`]: exact operator-series engine reproducing the expansions symbolically.

pub mod bloch;
pub mod error;
pub mod fourier;
pub mod modulation;
pub mod series;
pub mod stokes;

pub use error::{Error, Result};
pub use fourier::{ComplexFourierVector, TrigSeries, DEFAULT_MODES};
pub use stokes::{analytic_wave, branch_derivative, residual, solve_wave, ModelTag, WaveBranch};
