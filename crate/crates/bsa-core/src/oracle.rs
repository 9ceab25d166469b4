//! Brute-force k-space validation oracle.
//!
//! Instead of the analytic root reductions and pole algebra used by the
//! closed-form rates, these routines sum the underlying perturbation-theory
//! expressions over a dense radial k-grid with Lorentzian (η-smeared) energy
//! conservation, then extrapolate η → 0 with a Richardson step
//! (2·R(η/2) - R(η); the leading smearing error is linear in η). The
//! one-photon oracle converges to the closed form with no adjustable
//! constant; the two-photon oracle reproduces the closed form up to a single
//! global combinatorial constant shared by every operating point, which the
//! agreement tests fit once and report.
//!
//! Wavevectors are measured in units of k_F = √(2·m_n·μ_n), so the electron
//! dispersion is ξ_n = μ_n(k̂² - 1) and the radial measure contributes
//! S·(2·m_n·μ_n)·k̂·Δk̂ per grid point.

use crate::bcs::fermi;
use crate::error::{CoreError, Result};
use crate::material::{Band, MaterialParams, OperatingPoint, SuperconductorParams};
use crate::rates::BellChannel;

/// Discretization parameters for the k-space sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Number of radial grid points (midpoint rule); at least 1000.
    pub n_k: usize,
    /// Grid extent in units of k_F.
    pub k_max: f64,
    /// Lorentzian energy-conservation width η in meV (the Richardson step
    /// evaluates at η and η/2).
    pub eta: f64,
}

impl OracleConfig {
    /// Default discretization for a given superconductor: 20000 points to
    /// k̂ = 8 with η = 0.02·Δ₀.
    pub fn default_for(sc: &SuperconductorParams) -> Self {
        OracleConfig {
            n_k: 20000,
            k_max: 8.0,
            eta: 0.02 * sc.delta0,
        }
    }

    /// Validate the discretization against an operating point: basic ranges
    /// plus root coverage — the hole dispersion at the grid edge must exceed
    /// every edge-referenced photon scale by a safety margin, so that all
    /// resonance roots (and their Lorentzian tails) lie inside the grid.
    pub fn validate(&self, mat: &MaterialParams, op: &OperatingPoint) -> Result<()> {
        if self.n_k < 1000 {
            return Err(CoreError::InvalidParam(format!(
                "oracle n_k must be at least 1000, got {}",
                self.n_k
            )));
        }
        if !(self.k_max > 0.0) || !self.k_max.is_finite() {
            return Err(CoreError::InvalidParam(format!(
                "oracle k_max must be positive, got {}",
                self.k_max
            )));
        }
        if !(self.eta > 0.0) || !self.eta.is_finite() {
            return Err(CoreError::InvalidParam(format!(
                "oracle eta must be positive, got {}",
                self.eta
            )));
        }
        // One-photon roots sit near ξ_p ≈ ω̃_q; the two-photon pair
        // conservation peaks near the mean of the two ω̃, which the max
        // already covers. Margin: 5 meV plus ten Lorentzian widths.
        let needed = mat
            .omega_tilde(op.omega_mu)
            .max(mat.omega_tilde(op.omega_nu))
            + 5.0
            + 10.0 * self.eta;
        for band in Band::ALL {
            let xi_p_edge = mat.mu_n * self.k_max * self.k_max / mat.mbar(band) - mat.mu_p
                + mat.band_offset(band);
            if xi_p_edge < needed {
                return Err(CoreError::InvalidParam(format!(
                    "oracle grid too short for the {} band: xi_p(k_max) = {xi_p_edge:.3} meV \
                     < required {needed:.3} meV; increase k_max",
                    band.name()
                )));
            }
        }
        Ok(())
    }
}

/// Normalized Lorentzian of width η.
#[inline]
fn lorentz(x: f64, eta: f64) -> f64 {
    eta / std::f64::consts::PI / (x * x + eta * eta)
}

/// One-photon k-sum at fixed smearing η, restricted to grid indices
/// [lo, hi). The full range is [0, n_k); partial ranges exist so tests can
/// verify that the sum is independent of how the grid is partitioned.
#[allow(clippy::too_many_arguments)]
pub fn one_photon_smeared_range(
    mat: &MaterialParams,
    delta: f64,
    t_kelvin: f64,
    omega: f64,
    b2: f64,
    cfg: &OracleConfig,
    eta: f64,
    lo: usize,
    hi: usize,
) -> f64 {
    let omega_t = mat.omega_tilde(omega);
    let dk = cfg.k_max / cfg.n_k as f64;
    let mut acc = 0.0;
    for i in lo..hi.min(cfg.n_k) {
        let kh = (i as f64 + 0.5) * dk;
        let y = kh * kh;
        let xi_n = mat.mu_n * (y - 1.0);
        let energy = xi_n.hypot(delta);
        let u2 = 0.5 * (1.0 + xi_n / energy);
        let v2 = 0.5 * (1.0 - xi_n / energy);
        let occupation = fermi(energy, t_kelvin);
        for band in Band::ALL {
            let xi_p = mat.mu_n * y / mat.mbar(band) - mat.mu_p + mat.band_offset(band);
            acc += kh
                * (u2 * (1.0 - occupation) * lorentz(omega_t - xi_p - energy, eta)
                    + v2 * occupation * lorentz(omega_t - xi_p + energy, eta));
        }
    }
    mat.s_area * b2.sqrt() * (2.0 * mat.m_n * mat.mu_n) * dk * acc
}

/// One-photon k-sum over the full grid at fixed smearing η.
pub fn one_photon_smeared(
    mat: &MaterialParams,
    delta: f64,
    t_kelvin: f64,
    omega: f64,
    b2: f64,
    cfg: &OracleConfig,
    eta: f64,
) -> f64 {
    one_photon_smeared_range(mat, delta, t_kelvin, omega, b2, cfg, eta, 0, cfg.n_k)
}

/// Pair-total one-photon oracle rate with Richardson extrapolation over
/// (η, η/2). Agrees with [`crate::rates::rate_one_photon`] with no fitted
/// constant.
pub fn oracle_rate_one_photon(
    mat: &MaterialParams,
    delta: f64,
    op: &OperatingPoint,
    cfg: &OracleConfig,
) -> Result<f64> {
    mat.validate()?;
    cfg.validate(mat, op)?;
    let single = |omega: f64, eta: f64| {
        one_photon_smeared(mat, delta, op.t_kelvin, omega, op.b2, cfg, eta)
    };
    let at = |eta: f64| single(op.omega_mu, eta) + single(op.omega_nu, eta);
    Ok(2.0 * at(0.5 * cfg.eta) - at(cfg.eta))
}

/// Two-photon k-sum at fixed smearing η for one Bell channel.
///
/// The channel selects which valence band absorbs which photon:
/// Ψ uses the same band for both ((LH, LH) + (HH, HH)), Φ uses opposite
/// bands ((LH, HH) + (HH, LH)). Both the pair-energy conservation and the
/// intermediate-state poles are η-regularized; the latter is what keeps the
/// sum finite when a one-photon resonance lies inside the grid.
pub fn two_photon_smeared(
    mat: &MaterialParams,
    delta: f64,
    op: &OperatingPoint,
    channel: BellChannel,
    cfg: &OracleConfig,
    eta: f64,
) -> f64 {
    if matches!(channel, BellChannel::PsiMinus) {
        return 0.0;
    }
    let pairs: [(Band, Band); 2] = match channel {
        BellChannel::PsiPlus => [
            (Band::LightHole, Band::LightHole),
            (Band::HeavyHole, Band::HeavyHole),
        ],
        BellChannel::PhiPlus | BellChannel::PhiMinus => [
            (Band::LightHole, Band::HeavyHole),
            (Band::HeavyHole, Band::LightHole),
        ],
        BellChannel::PsiMinus => unreachable!(),
    };
    let w_mu = mat.omega_tilde(op.omega_mu);
    let w_nu = mat.omega_tilde(op.omega_nu);
    let dk = cfg.k_max / cfg.n_k as f64;
    let eta2 = eta * eta;
    let mut acc = 0.0;
    for i in 0..cfg.n_k {
        let kh = (i as f64 + 0.5) * dk;
        let y = kh * kh;
        let xi_n = mat.mu_n * (y - 1.0);
        let energy = xi_n.hypot(delta);
        for (band_a, band_b) in pairs {
            let xi_pa = mat.mu_n * y / mat.mbar(band_a) - mat.mu_p + mat.band_offset(band_a);
            let xi_pb = mat.mu_n * y / mat.mbar(band_b) - mat.mu_p + mat.band_offset(band_b);
            let om_mu = w_mu - xi_pa;
            let om_nu = w_nu - xi_pb;
            let den = ((om_mu - energy).powi(2) + eta2) * ((om_mu + energy).powi(2) + eta2);
            acc += kh * delta * delta * lorentz(om_mu + om_nu, eta) / den;
        }
    }
    16.0 * mat.s_area * (2.0 * mat.m_n * mat.mu_n) * op.b2 * dk * acc
}

/// Two-photon oracle rate with Richardson extrapolation over (η, η/2).
/// The Ψ⁻ channel is zero identically (its two band orderings interfere
/// destructively) and returns before any numerics.
pub fn oracle_rate_two_photon(
    mat: &MaterialParams,
    delta: f64,
    op: &OperatingPoint,
    channel: BellChannel,
    cfg: &OracleConfig,
) -> Result<f64> {
    if matches!(channel, BellChannel::PsiMinus) {
        return Ok(0.0);
    }
    mat.validate()?;
    cfg.validate(mat, op)?;
    let at = |eta: f64| two_photon_smeared(mat, delta, op, channel, cfg, eta);
    Ok(2.0 * at(0.5 * cfg.eta) - at(cfg.eta))
}
