//! The `validate` subcommand: re-derive the closed-form rates from the
//! brute-force k-space sums and report agreement.
//!
//! Three checks run:
//!
//! 1. one-photon rate on the configured material, no adjustable factor;
//! 2. single-band two-photon rate on a wide-splitting variant of the
//!    quantum-well preset, where the truncated grid has no stray pole; the
//!    smeared sum regularizes intermediate poles, which costs one universal
//!    constant (near 2) that must not drift across operating points;
//! 3. mixed-channel two-photon rate on an equal-hole-mass variant, where the
//!    closed form's shifted detunings are exact, against the same constant.

use anyhow::Result;

use bsa_core::bcs::gap_at_temperature;
use bsa_core::material::{MaterialParams, OperatingPoint};
use bsa_core::oracle::{oracle_rate_one_photon, oracle_rate_two_photon, OracleConfig};
use bsa_core::rates::{rate_one_photon, rate_two_photon, BellChannel};

use crate::config::Effective;

/// Outcome of one agreement check.
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn op_at(t_kelvin: f64, omega_sum: f64, detuning: f64) -> OperatingPoint {
    OperatingPoint::from_sum_detuning(t_kelvin, omega_sum, detuning, 1.0, 0.0)
}

/// Run the agreement suite. A `Err` is a configuration problem (the sums
/// could not be evaluated at all); a failed check is a normal return with
/// `pass == false`.
pub fn run(eff: &Effective) -> Result<Vec<CheckResult>> {
    let sc = eff.superconductor;
    let mut checks = Vec::new();

    // -- one-photon, configured material, no fitted constant ---------------
    let mat = eff.material.clone();
    let cfg = OracleConfig {
        n_k: eff.oracle.n_k,
        k_max: eff.oracle.k_max,
        eta: eff.oracle.eta,
    };
    let t = 0.5 * sc.tc;
    let delta = gap_at_temperature(&sc, t);
    let omega_sum = mat.hh_bracket_zero_omega_sum();
    let mut worst: f64 = 0.0;
    for frac in [2.4, 3.0, 4.4] {
        let op = op_at(t, omega_sum, frac * delta);
        let closed = rate_one_photon(&mat, delta, &op)?;
        let oracle = oracle_rate_one_photon(&mat, delta, &op, &cfg)?;
        worst = worst.max(((oracle - closed) / closed).abs());
    }
    checks.push(CheckResult {
        name: "one-photon closed form vs k-sum",
        pass: worst <= 0.02,
        detail: format!("max rel dev {worst:.2e} over 3 detunings (tol 2.0e-2)"),
    });

    // -- single-band two-photon, universal constant -------------------------
    let psi_mat = MaterialParams {
        dw_p: 50.0,
        ..MaterialParams::ingaas_qw()
    };
    let psi_cfg = OracleConfig {
        n_k: 40_000,
        k_max: 4.0,
        eta: 0.01 * sc.delta0,
    };
    let psi_omega_sum = psi_mat.hh_bracket_zero_omega_sum();
    let mut ratios = Vec::new();
    for t_frac in [0.2, 0.5, 0.8] {
        let t = t_frac * sc.tc;
        let delta = gap_at_temperature(&sc, t);
        for dom_frac in [0.3, 1.0, 1.5] {
            let op = op_at(t, psi_omega_sum, dom_frac * delta);
            let closed = rate_two_photon(&psi_mat, delta, &op, BellChannel::PsiPlus)?;
            let oracle =
                oracle_rate_two_photon(&psi_mat, delta, &op, BellChannel::PsiPlus, &psi_cfg)?;
            ratios.push(closed / oracle);
        }
    }
    let geomean = (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp();
    let drift = ratios
        .iter()
        .map(|r| (r / geomean - 1.0).abs())
        .fold(0.0, f64::max);
    let constant_ok = (1.8..=2.2).contains(&geomean);
    checks.push(CheckResult {
        name: "single-band two-photon vs k-sum",
        pass: constant_ok && drift <= 0.02,
        detail: format!(
            "fitted constant {geomean:.4} (expected in [1.8, 2.2]), \
             max drift {drift:.2e} over 9 points (tol 2.0e-2)"
        ),
    });

    // -- mixed-channel two-photon on equal hole masses ----------------------
    let eq_mat = MaterialParams {
        m_lh: 0.1,
        m_hh: 0.1,
        dw_p: 2.0,
        ..MaterialParams::ingaas_qw()
    };
    let eq_cfg = OracleConfig {
        n_k: 20_000,
        k_max: 4.0,
        eta: 0.02 * sc.delta0,
    };
    let eq_omega_sum =
        2.0 * (eq_mat.e_g + 0.5 * eq_mat.dw_p + eq_mat.mu_n) + 2.0 * eq_mat.mu_n / eq_mat.mbar_p();
    let mut worst_eq: f64 = 0.0;
    for t_frac in [0.3, 0.6] {
        let t = t_frac * sc.tc;
        let delta = gap_at_temperature(&sc, t);
        for dom_frac in [0.0, 0.5] {
            let op = op_at(t, eq_omega_sum, dom_frac * delta);
            let closed = rate_two_photon(&eq_mat, delta, &op, BellChannel::PhiPlus)?;
            let oracle =
                oracle_rate_two_photon(&eq_mat, delta, &op, BellChannel::PhiPlus, &eq_cfg)?;
            worst_eq = worst_eq.max((closed / oracle / geomean - 1.0).abs());
        }
    }
    checks.push(CheckResult {
        name: "mixed-channel two-photon vs k-sum",
        pass: worst_eq <= 0.02,
        detail: format!("max rel dev {worst_eq:.2e} from the fitted constant (tol 2.0e-2)"),
    });

    Ok(checks)
}
