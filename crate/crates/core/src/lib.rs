//! Reconstruction of phase-shift and attenuation projections from a single
//! simulated near-field hologram by one-step inversion of the contrast
//! transfer function (CTF) model.
//!
//! The pipeline: a weak object with projections (μ, φ) supported in the disc
//! |y| ≤ 1/2 produces hologram intensity I with CTF data Ψ = (I−1)/2 whose
//! spectrum mixes the two channels through chirps,
//!
//! ```text
//! Ψ̂(η) = cos(π|η|²/f)·μ̂(η) + sin(π|η|²/f)·φ̂(η),
//! ```
//!
//! where f is the (odd integer) Fresnel number. At the real zeros λ of a
//! sine-type generating function built so that the cos (resp. sin) chirp
//! vanishes there, the data exposes one channel in isolation:
//! φ̂(λθ) = (−1)^l Ψ̂(λθ). Paley-Wiener interpolation from those radii
//! recovers the full radial slice, and the inverse Fourier transform the
//! field.
//!
//! Modules follow the pipeline: [`fields`] (grids, FFT conventions, NUDFT),
//! [`genfn`] (generating functions and zero tables), [`pw`] (interpolation),
//! [`forward`] (phantoms, propagator, hologram simulation), [`retrieval`]
//! (end-to-end reconstruction), [`io`] (raw/CSV/PGM artifacts).

pub mod bessel;
pub mod error;
pub mod fields;
pub mod forward;
pub mod genfn;
pub mod io;
pub mod pw;
pub mod retrieval;

pub use error::{Error, Result};
