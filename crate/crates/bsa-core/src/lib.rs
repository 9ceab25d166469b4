//! Numerical model of a semiconductor–superconductor Bell-state analyzer.
//!
//! A thin superconductor proximizes a semiconductor quantum well; an
//! incident photon pair can break or recombine Cooper pairs while creating
//! valence-band holes. The analyzer discriminates two-photon Bell channels
//! by which valence bands the photons address:
//!
//! * [`bcs`] — universal gap curve Δ(T) and quasiparticle thermodynamics;
//! * [`material`] — material, superconductor, and drive parameter sets;
//! * [`rates`] — one-photon and two-photon hole-generation rates, detection
//!   purity, and the absorption-coefficient calibration of the coupling;
//! * [`spectral`] — detector-response broadening and source-bandwidth
//!   averaging;
//! * [`bell`] — Jones-calculus conversion between Bell states ahead of the
//!   analyzer;
//! * [`oracle`] — brute-force k-space sums validating the closed forms;
//! * [`quad`] — Gauss–Hermite quadrature used by the bandwidth averages.
//!
//! Units: energies in meV, temperatures in K, lengths in cm (ħ = c = 1
//! internally; see [`constants`] for the one unit-restoring constant).

// Parameter guards are written as `!(x > 0.0)` on purpose: the negation
// also rejects NaN, which `x <= 0.0` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bcs;
pub mod bell;
pub mod constants;
pub mod error;
pub mod material;
pub mod oracle;
pub mod quad;
pub mod rates;
pub mod spectral;

pub use error::{CoreError, Result};
