//! Error type shared by all numerical routines in this crate.

use thiserror::Error;

/// Errors produced by parameter validation and numerical routines.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A parameter failed a validity check (sign, range, or consistency).
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// The electron/hole mass ratio for a band is too close to 1; the
    /// one-photon root-finding algebra degenerates there (a 1 - m̄² factor
    /// appears in denominators).
    #[error("degenerate mass ratio for {band} band: |1 - mbar^2| = {value:e} <= 1e-9")]
    DegenerateMassRatio {
        /// Human-readable band name ("light-hole" or "heavy-hole").
        band: &'static str,
        /// The offending |1 - m̄²| value.
        value: f64,
    },

    /// An evaluation point sits exactly on a two-photon resonance pole, in a
    /// context where a finite answer is required (e.g. calibration).
    #[error("operating point sits on a resonance pole: {0}")]
    ResonanceSingularity(String),

    /// Coupling calibration cannot be performed (e.g. vanishing gap).
    #[error("coupling calibration impossible: {0}")]
    CalibrationImpossible(String),

    /// A mathematical domain violation (e.g. E = 0 in coherence factors).
    #[error("domain error: {0}")]
    DomainError(String),

    /// An iterative scheme failed to converge.
    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CoreError>;
