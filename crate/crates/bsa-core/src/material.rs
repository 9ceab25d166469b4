//! Material, superconductor, and operating-point parameter sets.
//!
//! Conventions: energies in meV, effective masses in units of the free
//! electron mass, areas in cm², velocities in cm/s. The semiconductor hosts
//! two valence bands (light hole and heavy hole); proximity to the
//! superconductor opens a pair gap Δ in the conduction band.

use crate::error::{CoreError, Result};

/// Valence band selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    /// Light-hole band (carries the splitting offset Δω_p).
    LightHole,
    /// Heavy-hole band (energy reference: zero splitting offset).
    HeavyHole,
}

impl Band {
    /// Both bands, in the order used for band sums.
    pub const ALL: [Band; 2] = [Band::LightHole, Band::HeavyHole];

    /// Human-readable name for error messages.
    pub fn name(self) -> &'static str {
        match self {
            Band::LightHole => "light-hole",
            Band::HeavyHole => "heavy-hole",
        }
    }
}

/// Semiconductor heterostructure parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialParams {
    /// Band gap E_g in meV.
    pub e_g: f64,
    /// Conduction-band (electron) effective mass, in units of m_e.
    pub m_n: f64,
    /// Light-hole effective mass, in units of m_e.
    pub m_lh: f64,
    /// Heavy-hole effective mass, in units of m_e.
    pub m_hh: f64,
    /// Hole chemical potential μ_p in meV (measured on the electron energy
    /// axis; deep valence-band values are large and negative).
    pub mu_p: f64,
    /// Light-hole/heavy-hole band splitting Δω_p in meV (≥ 0; the light-hole
    /// band is shifted by this amount).
    pub dw_p: f64,
    /// Electron quasi-Fermi level μ_n in meV (> 0; sets the k-space scale
    /// k_F = √(2 m_n μ_n) of the degenerate electron gas).
    pub mu_n: f64,
    /// Active device area S in cm².
    pub s_area: f64,
    /// Group velocity of light in the structure, in cm/s.
    pub v_g: f64,
}

impl MaterialParams {
    /// In₀.₅₃Ga₀.₄₇As quantum-well preset.
    pub fn ingaas_qw() -> Self {
        MaterialParams {
            e_g: 810.0,
            m_n: 0.041,
            m_lh: 0.052,
            m_hh: 0.45,
            mu_p: -1000.0,
            dw_p: 10.0,
            mu_n: 10.0,
            s_area: 1e-8,
            v_g: crate::constants::C_CM_PER_S / 3.0,
        }
    }

    /// Names accepted by [`MaterialParams::preset`].
    pub const PRESET_NAMES: &'static [&'static str] = &["InGaAs-QW"];

    /// Look up a named material preset.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "InGaAs-QW" => Some(Self::ingaas_qw()),
            _ => None,
        }
    }

    /// Check all parameter invariants, including non-degeneracy of both
    /// electron/hole mass ratios (the one-photon algebra divides by 1 - m̄²).
    pub fn validate(&self) -> Result<()> {
        let positive = [
            (self.e_g, "e_g"),
            (self.m_n, "m_n"),
            (self.m_lh, "m_lh"),
            (self.m_hh, "m_hh"),
            (self.mu_n, "mu_n"),
            (self.s_area, "s_area"),
            (self.v_g, "v_g"),
        ];
        for (v, name) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CoreError::InvalidParam(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.dw_p >= 0.0) || !self.dw_p.is_finite() {
            return Err(CoreError::InvalidParam(format!(
                "dw_p must be >= 0 and finite, got {}",
                self.dw_p
            )));
        }
        if !self.mu_p.is_finite() {
            return Err(CoreError::InvalidParam(format!(
                "mu_p must be finite, got {}",
                self.mu_p
            )));
        }
        for band in Band::ALL {
            let mbar = self.mbar(band);
            let degeneracy = (1.0 - mbar * mbar).abs();
            if degeneracy <= 1e-9 {
                return Err(CoreError::DegenerateMassRatio {
                    band: band.name(),
                    value: degeneracy,
                });
            }
        }
        Ok(())
    }

    /// Effective mass of the given valence band, in units of m_e.
    pub fn band_mass(&self, band: Band) -> f64 {
        match band {
            Band::LightHole => self.m_lh,
            Band::HeavyHole => self.m_hh,
        }
    }

    /// Splitting offset of the given band: Δω_p for the light hole, 0 for
    /// the heavy hole.
    pub fn band_offset(&self, band: Band) -> f64 {
        match band {
            Band::LightHole => self.dw_p,
            Band::HeavyHole => 0.0,
        }
    }

    /// Hole-to-electron mass ratio m̄ = m_band / m_n for the given band.
    pub fn mbar(&self, band: Band) -> f64 {
        self.band_mass(band) / self.m_n
    }

    /// Effective chemical potential μ_J = μ_p - Δω_pJ - μ_n/m̄_J entering the
    /// electron-axis resonance condition for the given band.
    pub fn mu_j(&self, band: Band) -> f64 {
        self.mu_p - self.band_offset(band) - self.mu_n / self.mbar(band)
    }

    /// Harmonic-mean hole mass 2/m_p = 1/m_LH + 1/m_HH, in units of m_e.
    pub fn m_p_harmonic(&self) -> f64 {
        2.0 * self.m_lh * self.m_hh / (self.m_lh + self.m_hh)
    }

    /// Mixed-band mass ratio m̄_p = m_p / m_n built from the harmonic mean.
    pub fn mbar_p(&self) -> f64 {
        self.m_p_harmonic() / self.m_n
    }

    /// Photon energy measured from the transition edge:
    /// ω̃ = ω - (E_g + μ_n + μ_p).
    pub fn omega_tilde(&self, omega: f64) -> f64 {
        omega - (self.e_g + self.mu_n + self.mu_p)
    }

    /// Pair energy ω_sum at which the heavy-hole two-photon resonance bracket
    /// vanishes at zero detuning, so that Ω^HH = 2Δ there:
    /// ω* = 2(E_g + μ_n) + 2μ_n/m̄_HH.
    pub fn hh_bracket_zero_omega_sum(&self) -> f64 {
        2.0 * (self.e_g + self.mu_n) + 2.0 * self.mu_n / self.mbar(Band::HeavyHole)
    }
}

/// Proximity superconductor parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperconductorParams {
    /// Zero-temperature induced gap Δ₀ in meV.
    pub delta0: f64,
    /// Critical temperature Tc in K.
    pub tc: f64,
}

impl SuperconductorParams {
    /// Niobium preset.
    pub fn nb() -> Self {
        SuperconductorParams {
            delta0: 3.6,
            tc: 9.25,
        }
    }

    /// Niobium-nitride preset.
    pub fn nbn() -> Self {
        SuperconductorParams {
            delta0: 5.2,
            tc: 16.0,
        }
    }

    /// Names accepted by [`SuperconductorParams::preset`].
    pub const PRESET_NAMES: &'static [&'static str] = &["Nb", "NbN"];

    /// Look up a named superconductor preset.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "Nb" => Some(Self::nb()),
            "NbN" => Some(Self::nbn()),
            _ => None,
        }
    }

    /// Check parameter invariants.
    pub fn validate(&self) -> Result<()> {
        if !(self.delta0 > 0.0) || !self.delta0.is_finite() {
            return Err(CoreError::InvalidParam(format!(
                "delta0 must be positive and finite, got {}",
                self.delta0
            )));
        }
        if !(self.tc > 0.0) || !self.tc.is_finite() {
            return Err(CoreError::InvalidParam(format!(
                "tc must be positive and finite, got {}",
                self.tc
            )));
        }
        Ok(())
    }
}

/// Drive conditions for a rate evaluation: temperature, the two photon
/// energies, the squared two-photon coupling, and an optional source
/// bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    /// Temperature in K (≥ 0).
    pub t_kelvin: f64,
    /// Photon energy ω_μ in meV (> 0).
    pub omega_mu: f64,
    /// Photon energy ω_ν in meV (> 0).
    pub omega_nu: f64,
    /// Squared interband coupling B² (dimensionless, > 0); set by
    /// calibration against a target absorption coefficient.
    pub b2: f64,
    /// Source bandwidth (FWHM, meV, ≥ 0) shared by both photons; 0 means
    /// monochromatic drive.
    pub bandwidth: f64,
}

impl OperatingPoint {
    /// Build an operating point from pair energy ω_sum and detuning
    /// Δω = ω_μ - ω_ν.
    pub fn from_sum_detuning(
        t_kelvin: f64,
        omega_sum: f64,
        detuning: f64,
        b2: f64,
        bandwidth: f64,
    ) -> Self {
        OperatingPoint {
            t_kelvin,
            omega_mu: 0.5 * (omega_sum + detuning),
            omega_nu: 0.5 * (omega_sum - detuning),
            b2,
            bandwidth,
        }
    }

    /// Pair energy ω_sum = ω_μ + ω_ν in meV.
    pub fn omega_sum(&self) -> f64 {
        self.omega_mu + self.omega_nu
    }

    /// Detuning Δω = ω_μ - ω_ν in meV.
    pub fn detuning(&self) -> f64 {
        self.omega_mu - self.omega_nu
    }

    /// Same operating point with the detuning replaced (pair energy kept).
    pub fn with_detuning(&self, detuning: f64) -> Self {
        Self::from_sum_detuning(
            self.t_kelvin,
            self.omega_sum(),
            detuning,
            self.b2,
            self.bandwidth,
        )
    }

    /// Check parameter invariants.
    pub fn validate(&self) -> Result<()> {
        if !(self.t_kelvin >= 0.0) || !self.t_kelvin.is_finite() {
            return Err(CoreError::InvalidParam(format!(
                "t_kelvin must be >= 0 and finite, got {}",
                self.t_kelvin
            )));
        }
        for (v, name) in [(self.omega_mu, "omega_mu"), (self.omega_nu, "omega_nu")] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CoreError::InvalidParam(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !(self.b2 > 0.0) || !self.b2.is_finite() {
            return Err(CoreError::InvalidParam(format!(
                "b2 must be positive and finite, got {}",
                self.b2
            )));
        }
        if !(self.bandwidth >= 0.0) || !self.bandwidth.is_finite() {
            return Err(CoreError::InvalidParam(format!(
                "bandwidth must be >= 0 and finite, got {}",
                self.bandwidth
            )));
        }
        Ok(())
    }
}
