//! Periodic generalized Lévy processes and their wavelet compressibility.
//!
//! The pipeline solves `L s = w` on the `d`-torus for a Lévy white noise `w`
//! and a Fourier-multiplier operator `L`, expands `s` in periodized Daubechies
//! wavelets, and measures how fast the best `n`-term approximation error
//! decays in a Besov quasi-norm.
//!
//! * [`exponents`]: Lévy exponent families, Blumenthal–Getoor indices and
//!   the predicted compressibility.
//! * [`sampling`]: discrete white-noise realizations on a dyadic grid.
//! * [`spectral`]: operator symbols and the spectral solver.
//! * [`wavelets`]: periodic Daubechies analysis and synthesis.
//! * [`besov`]: sequence norms, `n`-term approximation and rate estimation.
//! * [`harness`]: experiment configuration, orchestration and output.

pub mod besov;
pub mod error;
pub mod exponents;
pub mod harness;
mod poly;
pub mod sampling;
pub mod spectral;
pub mod wavelets;

pub use error::{Error, Result};
