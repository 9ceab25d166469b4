//! Physical constants and unit conventions.
//!
//! Internal unit system: energies in meV, temperatures in K, lengths in cm,
//! times in s, with ħ = c = 1 so that rates carry the same units as the
//! squared matrix elements that drive them ("natural" rate units). The one
//! place where absolute units are restored is the absorption-coefficient
//! bridge, which uses [`K_NUM`] (documented below) to convert a natural-unit
//! rate density into cm⁻¹.

/// Boltzmann constant in meV per kelvin.
pub const KB_MEV_PER_K: f64 = 0.0861733;

/// Electron rest energy m_e c² in meV.
pub const ME_C2_MEV: f64 = 5.1099895e8;

/// ħc in meV·cm.
pub const HBARC_MEV_CM: f64 = 1.973269804e-2;

/// ħ in meV·s.
pub const HBAR_MEV_S: f64 = 6.582119569e-13;

/// Speed of light in cm/s.
pub const C_CM_PER_S: f64 = 2.99792458e10;

/// Unit-restoring constant for the absorption coefficient:
/// `K_NUM = m_e c² / ((ħc)² · ħ)` in meV⁻²·cm⁻²·s⁻¹.
///
/// Multiplying a natural-unit rate expression of the form
/// `m_rel · (energy²) / (energy⁴) · S · B²` by `K_NUM / v_g` yields an
/// absorption coefficient in cm⁻¹. This is the only constant in the crate
/// that restores absolute (ħ-carrying) units; every other quantity stays in
/// the natural meV system.
pub const K_NUM: f64 = ME_C2_MEV / (HBARC_MEV_CM * HBARC_MEV_CM * HBAR_MEV_S);

/// Euler–Mascheroni constant γ.
pub const GAMMA_EULER: f64 = 0.577_215_664_901_532_9;

/// Cap applied to detection purity expressed in dB: values above this are
/// clamped (and flagged) so downstream tables stay finite and plottable.
pub const DP_DB_CAP: f64 = 320.0;

/// Weak-coupling BCS ratio a = π / e^γ ≈ 1.7639, relating the zero-T gap to
/// k_B·Tc via Δ₀ = a·k_B·Tc on the universal gap curve.
pub fn bcs_gap_ratio() -> f64 {
    std::f64::consts::PI / GAMMA_EULER.exp()
}

/// Heaviside step with the closed-edge convention Θ(0) = 1.
#[inline]
pub fn theta(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Sign function with sign(0) = 0.
#[inline]
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}
