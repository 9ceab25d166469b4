//! BCS thermodynamics: Fermi occupation, the universal weak-coupling gap
//! curve Δ(T), and Bogoliubov quasiparticle helpers.
//!
//! The reduced gap δ(t) = Δ(T)/Δ₀ with t = T/Tc is material-independent in
//! the weak-coupling limit; it is obtained from the self-consistency
//! condition
//!
//! ```text
//! ln(1/δ) = 2 ∫₀^∞ f(a·e/t) du,   e = √(u² + δ²),   a = π/e^γ,
//! ```
//!
//! where `f` is the Fermi function of a dimensionless argument (energies
//! measured in units of Δ₀ and temperature folded in through a·e/t). A
//! 1001-point table of δ against s = √(1-t) is built once per process and
//! interpolated linearly; the s-coordinate keeps the interpolation accurate
//! near Tc where δ ∝ √(1-t).

use std::sync::OnceLock;

use crate::constants::{bcs_gap_ratio, KB_MEV_PER_K};
use crate::error::{CoreError, Result};
use crate::material::SuperconductorParams;

/// Fermi–Dirac occupation 1/(e^{E/k_BT} + 1) with E in meV and T in K.
///
/// T ≤ 0 returns the zero-temperature step (0 for E > 0, 1 for E < 0, ½ at
/// E = 0). Large |E|/k_BT is handled without overflow.
pub fn fermi(e_mev: f64, t_kelvin: f64) -> f64 {
    if t_kelvin <= 0.0 {
        return if e_mev > 0.0 {
            0.0
        } else if e_mev < 0.0 {
            1.0
        } else {
            0.5
        };
    }
    fermi_reduced(e_mev / (KB_MEV_PER_K * t_kelvin))
}

/// Fermi function of a dimensionless argument x = E/k_BT.
fn fermi_reduced(x: f64) -> f64 {
    if x > 500.0 {
        0.0
    } else if x < -500.0 {
        1.0
    } else {
        1.0 / (x.exp() + 1.0)
    }
}

/// Self-consistency residual ln(1/δ) - 2∫ f(a·e/t) du at reduced
/// temperature t, evaluated with the substitution u = δ·sinh(w) which makes
/// the integrand smooth on the δ-scale:
/// ∫₀^∞ f(a·e/t)/e · e du → ∫₀^W f(a·δ·cosh(w)/t) dw.
fn gap_residual(delta: f64, t: f64) -> f64 {
    let a = bcs_gap_ratio();
    // Upper limit: a·δ·cosh(W)/t ≈ 45 bounds the Fermi tail below 3e-20.
    let cosh_max = (45.0 * t / (a * delta)).max(2.0);
    let w_max = cosh_max.acosh() + 1.0;
    // Simpson rule; the substituted integrand decays double-exponentially.
    let n = 512usize;
    let h = w_max / n as f64;
    let mut sum = 0.0;
    for i in 0..=n {
        let w = i as f64 * h;
        let val = fermi_reduced(a * delta * w.cosh() / t);
        let weight = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += weight * val;
    }
    let integral = sum * h / 3.0;
    (1.0 / delta).ln() - 2.0 * integral
}

/// Solve the universal gap equation directly at reduced temperature
/// t = T/Tc, by bisection on the residual. Returns δ ∈ [0, 1].
///
/// This is the reference solver; [`reduced_gap`] serves the same curve from
/// a prebuilt table and should agree to interpolation accuracy (~1e-6).
pub fn solve_reduced_gap(t: f64) -> f64 {
    if t >= 1.0 {
        return 0.0;
    }
    if t <= 0.0 {
        return 1.0;
    }
    // At δ = 1 the residual is -2I ≤ 0; if the thermal integral underflows
    // the gap is fully open.
    if gap_residual(1.0, t) >= 0.0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (1e-12, 1.0);
    // residual(lo) = ln(1e12) - 2I > 0 since I stays O(10); bisect 60 rounds
    // to f64-level resolution.
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if gap_residual(mid, t) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

const GAP_TABLE_LEN: usize = 1001;

fn gap_table() -> &'static [f64; GAP_TABLE_LEN] {
    static TABLE: OnceLock<Box<[f64; GAP_TABLE_LEN]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Box::new([0.0; GAP_TABLE_LEN]);
        for (i, slot) in table.iter_mut().enumerate() {
            // s = √(1-t) uniform grid: s = 0 at Tc (δ = 0), s = 1 at T = 0.
            let s = i as f64 / (GAP_TABLE_LEN - 1) as f64;
            let t = 1.0 - s * s;
            *slot = solve_reduced_gap(t);
        }
        table
    })
}

/// Reduced gap δ(t) = Δ(T)/Δ₀ on the universal weak-coupling curve,
/// interpolated from the prebuilt table. t ≥ 1 → 0, t ≤ 0 → 1.
pub fn reduced_gap(t: f64) -> f64 {
    if t >= 1.0 {
        return 0.0;
    }
    if t <= 0.0 {
        return 1.0;
    }
    let table = gap_table();
    let s = (1.0 - t).sqrt();
    let x = s * (GAP_TABLE_LEN - 1) as f64;
    let i = (x.floor() as usize).min(GAP_TABLE_LEN - 2);
    let frac = x - i as f64;
    table[i] * (1.0 - frac) + table[i + 1] * frac
}

/// Induced gap Δ(T) in meV for the given superconductor.
pub fn gap_at_temperature(sc: &SuperconductorParams, t_kelvin: f64) -> f64 {
    sc.delta0 * reduced_gap(t_kelvin / sc.tc)
}

/// Popular closed-form approximation Δ₀·tanh(1.74·√(Tc/T - 1)), used only as
/// a cross-check against the self-consistent curve (they differ by up to
/// ~0.017·Δ₀ at intermediate t).
pub fn gap_tanh_approx(sc: &SuperconductorParams, t_kelvin: f64) -> f64 {
    let t = t_kelvin / sc.tc;
    if t >= 1.0 {
        return 0.0;
    }
    if t <= 0.0 {
        return sc.delta0;
    }
    sc.delta0 * (1.74 * (1.0 / t - 1.0).sqrt()).tanh()
}

/// Bogoliubov quasiparticle energy E = √(ξ² + Δ²) in meV.
pub fn quasiparticle_energy(xi: f64, delta: f64) -> f64 {
    xi.hypot(delta)
}

/// BCS coherence factors (u², v²) at electron-axis energy ξ and gap Δ:
/// u² = (1 + ξ/E)/2, v² = (1 - ξ/E)/2.
///
/// The smaller factor is evaluated as Δ²/(2E(E + |ξ|)), which is the same
/// quantity with the cancellation in 1 - |ξ|/E removed, so both factors
/// keep full relative precision even for |ξ| ≫ Δ and u² + v² = 1 exactly.
///
/// Errors when ξ = Δ = 0, where E = 0 leaves the factors undefined.
pub fn coherence_factors(xi: f64, delta: f64) -> Result<(f64, f64)> {
    let e = quasiparticle_energy(xi, delta);
    if e == 0.0 {
        return Err(CoreError::DomainError(
            "coherence factors undefined at xi = delta = 0 (E = 0)".into(),
        ));
    }
    let minor = delta * delta / (2.0 * e * (e + xi.abs()));
    Ok(if xi >= 0.0 {
        (1.0 - minor, minor)
    } else {
        (minor, 1.0 - minor)
    })
}

/// Thermal quasiparticle occupation f(E(ξ, Δ), T) ∈ [0, ½].
pub fn qp_occupation(xi: f64, delta: f64, t_kelvin: f64) -> f64 {
    fermi(quasiparticle_energy(xi, delta), t_kelvin)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference values of the universal reduced-gap curve, computed with an
    /// independent adaptive-quadrature/Brent implementation of the same
    /// self-consistency condition.
    const REFERENCE: &[(f64, f64)] = &[
        (0.1, 0.999999987),
        (0.2, 0.999876762),
        (0.3, 0.997123762),
        (0.4, 0.985033712),
        (0.5, 0.956884715875),
        (0.6, 0.906993965),
        (0.7, 0.828770970),
        (0.8, 0.711043042),
        (0.9, 0.526341935),
        (0.95, 0.380316950),
        (0.99, 0.172953854),
    ];

    #[test]
    fn reduced_gap_matches_reference_curve() {
        for &(t, expected) in REFERENCE {
            let got = reduced_gap(t);
            assert!(
                (got - expected).abs() < 3e-5,
                "delta({t}) = {got}, expected {expected}"
            );
            let direct = solve_reduced_gap(t);
            assert!(
                (direct - expected).abs() < 1e-7,
                "direct delta({t}) = {direct}, expected {expected}"
            );
        }
    }

    #[test]
    fn gap_edges_and_monotonicity() {
        assert_eq!(reduced_gap(1.0), 0.0);
        assert_eq!(reduced_gap(1.5), 0.0);
        assert_eq!(reduced_gap(0.0), 1.0);
        assert_eq!(reduced_gap(-0.2), 1.0);
        assert!((reduced_gap(0.02) - 1.0).abs() < 1e-9);
        let mut prev = f64::INFINITY;
        for i in 0..=200 {
            let t = i as f64 / 200.0;
            let d = reduced_gap(t);
            assert!(d <= prev + 1e-12, "gap increased at t = {t}");
            prev = d;
        }
    }

    #[test]
    fn gap_square_root_onset_near_tc() {
        // δ ≈ 1.7366·√(1-t) as t → 1.
        let t = 0.999;
        let ratio = reduced_gap(t) / (1.0 - t).sqrt();
        assert!(
            (ratio - 1.7366).abs() < 0.01,
            "onset slope {ratio} deviates from 1.7366"
        );
    }

    #[test]
    fn gap_universality_across_materials() {
        let nb = SuperconductorParams::nb();
        let nbn = SuperconductorParams::nbn();
        for t in [0.15, 0.45, 0.75, 0.95] {
            let r_nb = gap_at_temperature(&nb, t * nb.tc) / nb.delta0;
            let r_nbn = gap_at_temperature(&nbn, t * nbn.tc) / nbn.delta0;
            // Identical up to rounding in the t·Tc/Tc round trip.
            assert!(
                (r_nb - r_nbn).abs() < 1e-12,
                "reduced gap differs between presets at t = {t}: {r_nb} vs {r_nbn}"
            );
        }
        // Absolute pin: Nb at half the critical temperature.
        let d = gap_at_temperature(&nb, 0.5 * nb.tc);
        assert!((d - 3.444784977150).abs() < 1e-4, "gap(0.5 Tc; Nb) = {d}");
    }

    #[test]
    fn tanh_form_is_close_but_distinct() {
        let nb = SuperconductorParams::nb();
        let mut max_diff: f64 = 0.0;
        for i in 1..200 {
            let t = i as f64 / 200.0;
            let diff =
                (gap_at_temperature(&nb, t * nb.tc) - gap_tanh_approx(&nb, t * nb.tc)).abs();
            max_diff = max_diff.max(diff / nb.delta0);
        }
        assert!(max_diff < 0.025, "tanh deviation too large: {max_diff}");
        assert!(max_diff > 0.010, "tanh deviation suspiciously small: {max_diff}");
    }

    #[test]
    fn fermi_limits_and_pin() {
        assert_eq!(fermi(1.0, 0.0), 0.0);
        assert_eq!(fermi(-1.0, 0.0), 1.0);
        assert_eq!(fermi(0.0, 0.0), 0.5);
        assert_eq!(fermi(1e6, 300.0), 0.0);
        assert_eq!(fermi(-1e6, 300.0), 1.0);
        // k_B·T = 1 meV at T = 11.6045 K, so f(E = 1 meV) = 1/(e + 1).
        let f = fermi(1.0, 11.6045);
        assert!((f - 0.26894).abs() < 1e-4);
    }

    #[test]
    fn quasiparticle_helpers() {
        let e = quasiparticle_energy(3.0, 4.0);
        assert!((e - 5.0).abs() < 1e-12);
        let (u2, v2) = coherence_factors(3.0, 4.0).unwrap();
        assert!((u2 + v2 - 1.0).abs() < 1e-12);
        assert!((u2 - 0.8).abs() < 1e-12);
        assert!((4.0 * e * e * u2 * v2 - 16.0).abs() < 1e-9);
        assert!(coherence_factors(0.0, 0.0).is_err());
        let occ = qp_occupation(0.0, 1.0, 11.6045);
        assert!((occ - 0.26894).abs() < 1e-4);
        assert!(occ <= 0.5);
    }
}
