//! Hole-generation rates in the proximized semiconductor and the detection
//! purity built from them.
//!
//! Three processes populate hole states when the structure is driven by a
//! photon pair (ω_μ, ω_ν):
//!
//! * **One-photon absorption** (`rate_one_photon`): a single photon promotes
//!   a valence electron across the gap, assisted by thermal quasiparticles.
//!   For each valence band the energy-conservation condition is quadratic in
//!   the hole energy; the rate is an exact sum over its real roots with
//!   BCS-coherence spectral weights.
//! * **Pair recombination into a spin-singlet-like (Ψ) channel**
//!   (`rate_two_photon` with `PsiPlus`): both photons share one valence
//!   band. The antisymmetric combination Ψ⁻ vanishes identically.
//! * **Pair recombination into the mixed-band (Φ) channel**: the photons
//!   address different valence bands; Φ⁺ and Φ⁻ are equal.
//!
//! Detection purity DP = (R_Ψ⁺ + R¹)/(R_Φ + R¹) measures how strongly the
//! analyzer prefers the Ψ channel; it is reported both as a ratio and in dB
//! with a ±320 dB clamp.

use crate::constants::{theta, DP_DB_CAP, K_NUM};
use crate::error::{CoreError, Result};
use crate::material::{Band, MaterialParams, OperatingPoint};

/// Two-photon Bell channels resolved by the analyzer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellChannel {
    /// Symmetric single-band channel.
    PsiPlus,
    /// Antisymmetric single-band channel (rate vanishes identically).
    PsiMinus,
    /// Symmetric mixed-band channel.
    PhiPlus,
    /// Antisymmetric mixed-band channel (equal to Φ⁺).
    PhiMinus,
}

/// Detuning scales Ω at which the two-photon denominators resonate, together
/// with the effective detunings of the mixed channel.
///
/// For a band X, Ω^X = √(b_X² + 4Δ²) with
/// b_X = m̄_X·(ω_sum - 2(E_g + Δω_p^X + μ_n)) - 2μ_n; the mixed scale uses
/// the harmonic-mean mass ratio and the mean band offset ½Δω_p. Every Ω is
/// ≥ 2Δ by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceScales {
    /// Light-hole-channel resonance scale Ω^LH in meV.
    pub omega_lh: f64,
    /// Heavy-hole-channel resonance scale Ω^HH in meV.
    pub omega_hh: f64,
    /// Mixed-channel resonance scale Ω in meV.
    pub omega_mixed: f64,
    /// Effective mixed-channel detuning Δω - Δω_p in meV.
    pub dw_lh: f64,
    /// Effective mixed-channel detuning Δω + Δω_p in meV.
    pub dw_hh: f64,
}

impl ResonanceScales {
    /// Resonance scale of the single-band channel for the given band.
    pub fn omega(&self, band: Band) -> f64 {
        match band {
            Band::LightHole => self.omega_lh,
            Band::HeavyHole => self.omega_hh,
        }
    }
}

/// Compute the resonance scales at pair energy ω_sum and detuning Δω for a
/// given gap Δ (meV).
pub fn resonance_scales(
    mat: &MaterialParams,
    delta: f64,
    omega_sum: f64,
    detuning: f64,
) -> ResonanceScales {
    let band_scale = |mbar: f64, offset: f64| -> f64 {
        let bracket = mbar * (omega_sum - 2.0 * (mat.e_g + offset + mat.mu_n)) - 2.0 * mat.mu_n;
        (bracket * bracket + 4.0 * delta * delta).sqrt()
    };
    ResonanceScales {
        omega_lh: band_scale(mat.mbar(Band::LightHole), mat.dw_p),
        omega_hh: band_scale(mat.mbar(Band::HeavyHole), 0.0),
        omega_mixed: band_scale(mat.mbar_p(), 0.5 * mat.dw_p),
        dw_lh: detuning - mat.dw_p,
        dw_hh: detuning + mat.dw_p,
    }
}

/// Pair-energy threshold of the single-band (Ψ) channel for band X:
/// 2(E_g + Δω_p^X + μ_n).
pub fn psi_threshold(mat: &MaterialParams, band: Band) -> f64 {
    2.0 * (mat.e_g + mat.band_offset(band) + mat.mu_n)
}

/// Pair-energy threshold of the mixed (Φ) channel: 2(E_g + ½Δω_p + μ_n).
pub fn phi_threshold(mat: &MaterialParams) -> f64 {
    2.0 * (mat.e_g + 0.5 * mat.dw_p + mat.mu_n)
}

fn check_mass_ratio(mat: &MaterialParams, band: Band) -> Result<f64> {
    let mbar = mat.mbar(band);
    let degeneracy = (1.0 - mbar * mbar).abs();
    if degeneracy <= 1e-9 {
        return Err(CoreError::DegenerateMassRatio {
            band: band.name(),
            value: degeneracy,
        });
    }
    Ok(mbar)
}

/// One-photon hole-generation rate for a single photon of energy ω (meV).
///
/// For each valence band the joint dispersion gives the resonance condition
/// ω̃ - ξ_p = ±E(ξ_n) with ξ_n = m̄(ξ_p + μ_J); squaring yields a quadratic
/// for ξ_p whose discriminant is Λ = m̄²W² + Δ²(1 - m̄²), W = ω̃ + μ_J. Each
/// real root in the physical half-line (k² ≥ 0) contributes its coherence
/// factor over the Jacobian |E ± m̄ξ_n| = √Λ:
///
/// * absorption branch (ω̃ - ξ_p = +E): (E + ξ_n)/(2√Λ) · (1 - f(E))
/// * emission branch (ω̃ - ξ_p = -E): (E - ξ_n)/(2√Λ) · f(E)
///
/// All contributions are non-negative. The total is scaled by S·√B²·m_pJ.
pub fn rate_one_photon_single(
    mat: &MaterialParams,
    delta: f64,
    t_kelvin: f64,
    omega: f64,
    b2: f64,
) -> Result<f64> {
    let omega_t = mat.omega_tilde(omega);
    let mut total = 0.0;
    for band in Band::ALL {
        let mbar = check_mass_ratio(mat, band)?;
        let mu_j = mat.mu_j(band);
        let w = omega_t + mu_j;
        let one_minus_m2 = 1.0 - mbar * mbar;
        let lambda = mbar * mbar * w * w + delta * delta * one_minus_m2;
        if lambda <= 0.0 {
            continue;
        }
        let sqrt_lambda = lambda.sqrt();
        let support_min = -mat.mu_p + mat.band_offset(band);
        let mut band_sum = 0.0;
        for sign in [1.0, -1.0] {
            let xi_p = (omega_t + mbar * mbar * mu_j + sign * sqrt_lambda) / one_minus_m2;
            if xi_p < support_min {
                continue;
            }
            let xi_n = mbar * (xi_p + mu_j);
            let energy = xi_n.hypot(delta);
            let detune = omega_t - xi_p;
            let occupation = crate::bcs::fermi(energy, t_kelvin);
            let contrib = if detune >= 0.0 {
                (energy + xi_n) / (2.0 * sqrt_lambda) * (1.0 - occupation)
            } else {
                (energy - xi_n) / (2.0 * sqrt_lambda) * occupation
            };
            band_sum += contrib;
        }
        total += mat.band_mass(band) * band_sum;
    }
    Ok(mat.s_area * b2.sqrt() * total)
}

/// Total one-photon rate for the photon pair: the single-photon rate
/// evaluated at ω_μ plus the one at ω_ν.
pub fn rate_one_photon(mat: &MaterialParams, delta: f64, op: &OperatingPoint) -> Result<f64> {
    Ok(
        rate_one_photon_single(mat, delta, op.t_kelvin, op.omega_mu, op.b2)?
            + rate_one_photon_single(mat, delta, op.t_kelvin, op.omega_nu, op.b2)?,
    )
}

/// Two-photon Cooper-pair recombination rate for the requested Bell channel.
///
/// Closed forms (Θ is the unit step with Θ(0) = 1, Δω the detuning):
///
/// * Ψ⁺: 256·S·B²·Δ²·Σ_X m_pX·Θ(ω_sum - thr_X) / ((Δω + Ω^X)²(Δω - Ω^X)²)
/// * Ψ⁻: identically 0 (destructive interference of the two band orderings)
/// * Φ±: 256·S·m_p·B²·Δ²·Θ(ω_sum - thr_Φ)·Σ over the two effective
///   detunings Δω ∓ Δω_p with the mixed scale Ω.
///
/// A vanishing gap returns 0 before any denominator is formed. An exactly
/// resonant detuning (Δω = ±Ω) returns +∞ as a sentinel; sweep drivers are
/// expected to perturb and flag such cells.
pub fn rate_two_photon(
    mat: &MaterialParams,
    delta: f64,
    op: &OperatingPoint,
    channel: BellChannel,
) -> Result<f64> {
    if matches!(channel, BellChannel::PsiMinus) {
        return Ok(0.0);
    }
    for band in Band::ALL {
        check_mass_ratio(mat, band)?;
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    let omega_sum = op.omega_sum();
    let detuning = op.detuning();
    let scales = resonance_scales(mat, delta, omega_sum, detuning);
    let prefactor = 256.0 * mat.s_area * op.b2 * delta * delta;
    match channel {
        BellChannel::PsiPlus => {
            let mut sum = 0.0;
            for band in Band::ALL {
                if theta(omega_sum - psi_threshold(mat, band)) == 0.0 {
                    continue;
                }
                let omega_x = scales.omega(band);
                let den = (detuning + omega_x).powi(2) * (detuning - omega_x).powi(2);
                if den == 0.0 {
                    return Ok(f64::INFINITY);
                }
                sum += mat.band_mass(band) / den;
            }
            Ok(prefactor * sum)
        }
        BellChannel::PhiPlus | BellChannel::PhiMinus => {
            if theta(omega_sum - phi_threshold(mat)) == 0.0 {
                return Ok(0.0);
            }
            let omega_m = scales.omega_mixed;
            let mut sum = 0.0;
            for dw in [scales.dw_lh, scales.dw_hh] {
                let den = (dw + omega_m).powi(2) * (dw - omega_m).powi(2);
                if den == 0.0 {
                    return Ok(f64::INFINITY);
                }
                sum += 1.0 / den;
            }
            Ok(prefactor * mat.m_p_harmonic() * sum)
        }
        BellChannel::PsiMinus => unreachable!(),
    }
}

/// All rates at one operating point, with the detection purity assembled
/// from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBreakdown {
    /// One-photon pair-total rate R¹.
    pub r1: f64,
    /// Diagnostic copy of R¹ before the non-negativity floor. The exact
    /// spectral weights are non-negative term by term, so this always equals
    /// `r1`; the field is kept so output tables expose the floor explicitly.
    pub r1_unfloored: f64,
    /// Two-photon rate of the symmetric single-band channel.
    pub r2_psi_plus: f64,
    /// Two-photon rate of the antisymmetric single-band channel (always 0).
    pub r2_psi_minus: f64,
    /// Two-photon rate of the mixed channel (Φ⁺ = Φ⁻).
    pub r2_phi: f64,
    /// Detection purity DP = (R_Ψ⁺ + R¹)/(R_Φ + R¹); NaN when both the
    /// numerator and denominator vanish (or are both infinite).
    pub dp: f64,
    /// DP in dB, clamped to ±[`DP_DB_CAP`].
    pub dp_db: f64,
    /// True when `dp_db` was clamped (DP out of the representable dB range).
    pub clamped: bool,
}

/// Assemble detection purity from DP numerator and denominator rates.
pub(crate) fn assemble_dp(num: f64, den: f64) -> (f64, f64, bool) {
    let dp = if num == 0.0 && den == 0.0 {
        f64::NAN
    } else {
        num / den
    };
    if dp.is_nan() {
        (dp, f64::NAN, false)
    } else if dp.is_infinite() {
        (dp, DP_DB_CAP, true)
    } else if dp == 0.0 {
        (dp, -DP_DB_CAP, true)
    } else {
        let db = 20.0 * dp.log10();
        if db > DP_DB_CAP {
            (dp, DP_DB_CAP, true)
        } else if db < -DP_DB_CAP {
            (dp, -DP_DB_CAP, true)
        } else {
            (dp, db, false)
        }
    }
}

/// Evaluate every rate at the operating point and form the detection purity.
pub fn detection_purity(
    mat: &MaterialParams,
    delta: f64,
    op: &OperatingPoint,
) -> Result<RateBreakdown> {
    let r1 = rate_one_photon(mat, delta, op)?;
    let r2_psi_plus = rate_two_photon(mat, delta, op, BellChannel::PsiPlus)?;
    let r2_psi_minus = rate_two_photon(mat, delta, op, BellChannel::PsiMinus)?;
    let r2_phi = rate_two_photon(mat, delta, op, BellChannel::PhiPlus)?;
    let (dp, dp_db, clamped) = assemble_dp(r2_psi_plus + r1, r2_phi + r1);
    Ok(RateBreakdown {
        r1,
        r1_unfloored: r1,
        r2_psi_plus,
        r2_psi_minus,
        r2_phi,
        dp,
        dp_db,
        clamped,
    })
}

/// Absorption coefficient α in cm⁻¹ seen by a classical probe through the
/// heavy-hole two-photon channel:
/// α = 256·S·m_HH·B²·Δ² / ((Δω + Ω^HH)²(Δω - Ω^HH)²) · K_NUM / v_g.
///
/// Δ = 0 gives α = 0 (the Δ² numerator wins); an exactly resonant detuning
/// is an error here because calibration needs a finite value.
pub fn absorption_coefficient(
    mat: &MaterialParams,
    delta: f64,
    op: &OperatingPoint,
) -> Result<f64> {
    for band in Band::ALL {
        check_mass_ratio(mat, band)?;
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    let detuning = op.detuning();
    let scales = resonance_scales(mat, delta, op.omega_sum(), detuning);
    let den = (detuning + scales.omega_hh).powi(2) * (detuning - scales.omega_hh).powi(2);
    if den == 0.0 {
        return Err(CoreError::ResonanceSingularity(format!(
            "detuning {detuning} meV sits on the heavy-hole scale ±{} meV",
            scales.omega_hh
        )));
    }
    Ok(256.0 * mat.s_area * mat.m_hh * op.b2 * delta * delta / den * K_NUM / mat.v_g)
}

/// Calibrate the squared coupling B² so that the absorption coefficient at
/// the zero-temperature reference point (pair energy at the heavy-hole
/// bracket zero, detuning Δω = Δ₀, so Ω^HH = 2Δ₀) equals `alpha_target`
/// (cm⁻¹): B² = 9·Δ₀²·α·v_g / (256·S·m_HH·K_NUM).
pub fn calibrate_coupling(
    mat: &MaterialParams,
    sc: &crate::material::SuperconductorParams,
    alpha_target: f64,
) -> Result<f64> {
    if !(alpha_target > 0.0) || !alpha_target.is_finite() {
        return Err(CoreError::InvalidParam(format!(
            "alpha_target must be positive and finite, got {alpha_target}"
        )));
    }
    if !(sc.delta0 > 0.0) {
        return Err(CoreError::CalibrationImpossible(
            "zero-temperature gap vanishes; absorption has no Δ² to calibrate against".into(),
        ));
    }
    mat.validate()?;
    Ok(9.0 * sc.delta0 * sc.delta0 * alpha_target * mat.v_g
        / (256.0 * mat.s_area * mat.m_hh * K_NUM))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::SuperconductorParams;

    /// Gap value Δ(0.5·Tc) for Nb used to pin rate values; fixing it
    /// explicitly decouples these pins from gap-table interpolation detail.
    const DELTA_HALF_TC: f64 = 3.444784977150;

    fn mat() -> MaterialParams {
        MaterialParams::ingaas_qw()
    }

    fn op_at(detuning: f64, t_kelvin: f64, b2: f64) -> OperatingPoint {
        let m = mat();
        OperatingPoint::from_sum_detuning(
            t_kelvin,
            m.hh_bracket_zero_omega_sum(),
            detuning,
            b2,
            0.0,
        )
    }

    #[test]
    fn hh_scale_is_twice_gap_at_bracket_zero() {
        let m = mat();
        let scales = resonance_scales(&m, 3.6, m.hh_bracket_zero_omega_sum(), 0.0);
        assert!((scales.omega_hh - 7.2).abs() < 1e-9);
        // Every scale dominates 2Δ.
        for s in [scales.omega_lh, scales.omega_hh, scales.omega_mixed] {
            assert!(s >= 2.0 * 3.6 - 1e-12);
        }
    }

    #[test]
    fn threshold_ordering() {
        let m = mat();
        let thr_hh = psi_threshold(&m, Band::HeavyHole);
        let thr_lh = psi_threshold(&m, Band::LightHole);
        let thr_phi = phi_threshold(&m);
        assert!(thr_hh < thr_phi);
        assert!(thr_phi < thr_lh);
        assert!((thr_hh - 1640.0).abs() < 1e-9);
        assert!((thr_lh - 1660.0).abs() < 1e-9);
        assert!((thr_phi - 1650.0).abs() < 1e-9);
    }

    #[test]
    fn one_photon_rate_reference_value() {
        let m = mat();
        let t = 0.5 * SuperconductorParams::nb().tc;
        let op = op_at(3.0 * DELTA_HALF_TC, t, 1.0);
        let r1 = rate_one_photon(&m, DELTA_HALF_TC, &op).unwrap();
        let expected = 5.024742733022e-10;
        assert!(
            ((r1 - expected) / expected).abs() < 1e-6,
            "r1 = {r1:e}, expected {expected:e}"
        );
        assert!(r1 >= 0.0);
    }

    #[test]
    fn one_photon_rate_is_even_in_detuning() {
        let m = mat();
        let t = 0.5 * SuperconductorParams::nb().tc;
        for dom in [0.5, 2.0, 7.0, 11.0] {
            let plus = rate_one_photon(&m, DELTA_HALF_TC, &op_at(dom, t, 1.0)).unwrap();
            let minus = rate_one_photon(&m, DELTA_HALF_TC, &op_at(-dom, t, 1.0)).unwrap();
            assert!(((plus - minus) / plus.max(1e-300)).abs() < 1e-12);
        }
    }

    #[test]
    fn psi_plus_reference_value_and_evenness() {
        let m = mat();
        let op = op_at(DELTA_HALF_TC, 0.0, 1.0);
        let psi = rate_two_photon(&m, DELTA_HALF_TC, &op, BellChannel::PsiPlus).unwrap();
        let expected = 1.078662877539e-08;
        assert!(
            ((psi - expected) / expected).abs() < 1e-6,
            "psi+ = {psi:e}, expected {expected:e}"
        );
        let psi_neg = rate_two_photon(
            &m,
            DELTA_HALF_TC,
            &op.with_detuning(-DELTA_HALF_TC),
            BellChannel::PsiPlus,
        )
        .unwrap();
        assert!(((psi - psi_neg) / psi).abs() < 1e-12);
    }

    #[test]
    fn psi_minus_vanishes_identically() {
        let m = mat();
        for dom in [0.0, 1.0, 5.0, 17.3] {
            let r = rate_two_photon(&m, 3.6, &op_at(dom, 2.0, 0.7), BellChannel::PsiMinus)
                .unwrap();
            assert_eq!(r, 0.0);
        }
    }

    #[test]
    fn phi_reference_value_on_equal_mass_material() {
        // Equal hole masses make the mixed channel exactly resonant with its
        // closed form; the reference value was computed independently.
        let mut m = mat();
        m.m_lh = 0.1;
        m.m_hh = 0.1;
        m.dw_p = 2.0;
        m.validate().unwrap();
        let omega_sum = 2.0 * (m.e_g + 0.5 * m.dw_p + m.mu_n) + 2.0 * m.mu_n / m.mbar_p();
        assert!((omega_sum - 1650.2).abs() < 1e-6);
        let op = OperatingPoint::from_sum_detuning(0.0, omega_sum, 0.5 * DELTA_HALF_TC, 1.0, 0.0);
        let phi = rate_two_photon(&m, DELTA_HALF_TC, &op, BellChannel::PhiPlus).unwrap();
        let expected = 4.041947868991e-09;
        assert!(
            ((phi - expected) / expected).abs() < 1e-6,
            "phi = {phi:e}, expected {expected:e}"
        );
        // Φ⁺ = Φ⁻ exactly.
        let phi_minus = rate_two_photon(&m, DELTA_HALF_TC, &op, BellChannel::PhiMinus).unwrap();
        assert_eq!(phi, phi_minus);
    }

    #[test]
    fn phi_dead_above_splitting_threshold_at_bracket_zero() {
        // With Δω_p large enough, the mixed-channel threshold exceeds the
        // heavy-hole bracket-zero pair energy and Φ vanishes exactly.
        let m = mat();
        assert!(phi_threshold(&m) > m.hh_bracket_zero_omega_sum());
        let phi = rate_two_photon(&m, 3.6, &op_at(1.0, 0.0, 1.0), BellChannel::PhiPlus).unwrap();
        assert_eq!(phi, 0.0);
    }

    #[test]
    fn rates_vanish_with_gap() {
        let m = mat();
        let op = op_at(2.0, 3.0, 1.0);
        for ch in [BellChannel::PsiPlus, BellChannel::PhiPlus] {
            assert_eq!(rate_two_photon(&m, 0.0, &op, ch).unwrap(), 0.0);
        }
        // ... and are nonzero with the gap open (Ψ at this point).
        assert!(rate_two_photon(&m, 3.6, &op, BellChannel::PsiPlus).unwrap() > 0.0);
    }

    /// A synthetic material whose heavy-hole resonance lands on exactly
    /// representable floats: the masses are powers of two (m̄_HH = 2), and at
    /// pair energy 1075 meV the heavy-hole bracket is 6 meV while Δ = 4 meV,
    /// so Ω^HH = √(6² + (2·4)²) = 10 exactly. A detuning of 10 meV then hits
    /// the pole bit-for-bit — something the default preset cannot do because
    /// its scales are irrational in binary.
    fn exact_resonance_setup() -> (MaterialParams, OperatingPoint) {
        let m = MaterialParams {
            e_g: 512.0,
            m_n: 0.25,
            m_lh: 0.0625,
            m_hh: 0.5,
            mu_p: -1024.0,
            dw_p: 64.0,
            mu_n: 16.0,
            s_area: 1.0e-8,
            v_g: 1.0e10,
        };
        m.validate().unwrap();
        let op = OperatingPoint::from_sum_detuning(0.0, 1075.0, 10.0, 1.0, 0.0);
        (m, op)
    }

    #[test]
    fn exact_resonance_returns_infinity_sentinel() {
        let (m, op) = exact_resonance_setup();
        assert_eq!(op.detuning(), 10.0);
        let scales = resonance_scales(&m, 4.0, op.omega_sum(), op.detuning());
        assert_eq!(scales.omega_hh, 10.0);
        let psi = rate_two_photon(&m, 4.0, &op, BellChannel::PsiPlus).unwrap();
        assert!(psi.is_infinite() && psi > 0.0);
    }

    #[test]
    fn degenerate_mass_ratio_is_an_error() {
        let mut m = mat();
        m.m_lh = m.m_n;
        let op = op_at(1.0, 2.0, 1.0);
        assert!(matches!(
            rate_one_photon(&m, 3.6, &op),
            Err(CoreError::DegenerateMassRatio { .. })
        ));
        assert!(matches!(
            rate_two_photon(&m, 3.6, &op, BellChannel::PsiPlus),
            Err(CoreError::DegenerateMassRatio { .. })
        ));
    }

    #[test]
    fn detection_purity_reference_values() {
        let m = mat();
        let sc = SuperconductorParams::nb();
        let b2 = calibrate_coupling(&m, &sc, 1.0e4).unwrap();
        let t = 0.5 * sc.tc;
        let near = detection_purity(&m, DELTA_HALF_TC, &op_at(DELTA_HALF_TC, t, b2)).unwrap();
        assert!(
            (near.dp_db - 203.03).abs() < 0.05,
            "dp_db near = {}",
            near.dp_db
        );
        assert!(!near.clamped);
        let far = detection_purity(&m, DELTA_HALF_TC, &op_at(3.0 * DELTA_HALF_TC, t, b2)).unwrap();
        assert!((far.dp_db - 3.81).abs() < 0.05, "dp_db far = {}", far.dp_db);
        assert_eq!(near.r2_psi_minus, 0.0);
        assert_eq!(near.r1, near.r1_unfloored);
    }

    #[test]
    fn detection_purity_is_scale_invariant_in_area() {
        let m = mat();
        let mut m2 = m.clone();
        m2.s_area *= 2.0;
        let t = 0.5 * SuperconductorParams::nb().tc;
        let op = op_at(DELTA_HALF_TC, t, 0.005);
        let a = detection_purity(&m, DELTA_HALF_TC, &op).unwrap();
        let b = detection_purity(&m2, DELTA_HALF_TC, &op).unwrap();
        // Doubling the area doubles every rate exactly; DP is untouched.
        assert_eq!(a.dp, b.dp);
    }

    #[test]
    fn dp_assembly_edge_cases() {
        // Both zero: undefined.
        let (dp, db, clamped) = assemble_dp(0.0, 0.0);
        assert!(dp.is_nan() && db.is_nan() && !clamped);
        // Zero denominator: +inf, capped.
        let (dp, db, clamped) = assemble_dp(1e-12, 0.0);
        assert!(dp.is_infinite());
        assert_eq!(db, DP_DB_CAP);
        assert!(clamped);
        // Zero numerator: capped below.
        let (dp, db, clamped) = assemble_dp(0.0, 1e-12);
        assert_eq!(dp, 0.0);
        assert_eq!(db, -DP_DB_CAP);
        assert!(clamped);
        // Huge finite ratio: capped.
        let (_, db, clamped) = assemble_dp(1.0, 1e-300);
        assert_eq!(db, DP_DB_CAP);
        assert!(clamped);
        // Ordinary ratio: 20·log10.
        let (dp, db, clamped) = assemble_dp(10.0, 1.0);
        assert!((dp - 10.0).abs() < 1e-12);
        assert!((db - 20.0).abs() < 1e-12);
        assert!(!clamped);
    }

    #[test]
    fn calibration_reference_and_round_trip() {
        let m = mat();
        let sc = SuperconductorParams::nb();
        let b2 = calibrate_coupling(&m, &sc, 1.0e4).unwrap();
        let expected = 5.0747327960e-3;
        assert!(
            ((b2 - expected) / expected).abs() < 1e-9,
            "B2 = {b2:e}, expected {expected:e}"
        );
        // Round trip: α at the reference operating point reproduces the
        // target.
        let op = op_at(sc.delta0, 0.0, b2);
        let alpha = absorption_coefficient(&m, sc.delta0, &op).unwrap();
        assert!(((alpha - 1.0e4) / 1.0e4).abs() < 1e-10);
        // Linearity: doubling the target doubles B².
        let b2_double = calibrate_coupling(&m, &sc, 2.0e4).unwrap();
        assert_eq!(b2_double, 2.0 * b2);
        // Degenerate cases error.
        assert!(calibrate_coupling(&m, &sc, 0.0).is_err());
        let sc_gapless = SuperconductorParams {
            delta0: 0.0,
            tc: 9.25,
        };
        assert!(calibrate_coupling(&m, &sc_gapless, 1.0e4).is_err());
    }

    #[test]
    fn absorption_edge_cases() {
        let m = mat();
        let op = op_at(3.6, 0.0, 1.0);
        // Vanishing gap: no absorption.
        assert_eq!(absorption_coefficient(&m, 0.0, &op).unwrap(), 0.0);
        // Exactly resonant detuning: error.
        let (m_exact, op_res) = exact_resonance_setup();
        assert!(matches!(
            absorption_coefficient(&m_exact, 4.0, &op_res),
            Err(CoreError::ResonanceSingularity(_))
        ));
    }
}
