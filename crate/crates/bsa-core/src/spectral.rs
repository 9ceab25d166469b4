//! Finite-linewidth effects: detector-response broadening of the one-photon
//! spectrum and finite source bandwidth folded into the detection purity.
//!
//! The broadening kernel models an energy response that is Gaussian around
//! the nominal energy but develops a flat high-energy plateau (a constant
//! fraction `tail_level` of the Gaussian peak) extending a few decay lengths
//! `tail_lambda` above it — the generic shape of subgap sensitivity in a
//! detector with a weak above-gap leakage channel. Source bandwidth is
//! treated as independent Gaussian jitter of the two photon energies and is
//! averaged with a Gauss–Hermite product rule; each rate is averaged
//! separately and the purity is formed from the averaged rates.

use crate::bcs::gap_at_temperature;
use crate::error::{CoreError, Result};
use crate::material::{MaterialParams, OperatingPoint, SuperconductorParams};
use crate::quad::gauss_hermite;
use crate::rates::{
    assemble_dp, detection_purity, rate_one_photon_single, rate_two_photon, BellChannel,
    RateBreakdown,
};

/// Default plateau height as a fraction of the Gaussian peak: 10^(-3.5).
pub const DEFAULT_TAIL_LEVEL: f64 = 3.162_277_660_168_379_5e-4;

/// Default plateau decay length in meV.
pub const DEFAULT_TAIL_LAMBDA_MEV: f64 = 5.0;

/// FWHM-to-σ conversion factor 2√(2·ln 2).
const FWHM_TO_SIGMA: f64 = 2.354_820_045_030_949;

/// Detector energy-response kernel: Gaussian core of width σ plus a
/// one-sided high-energy plateau at `tail_level` times the peak, truncated
/// five decay lengths above the core.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralKernel {
    /// Gaussian core standard deviation σ in meV.
    pub sigma: f64,
    /// Plateau height as a fraction of the Gaussian peak (0 < level < 1).
    pub tail_level: f64,
    /// Plateau decay length λ in meV; the sampled window extends 5λ above
    /// the core.
    pub tail_lambda: f64,
}

impl SpectralKernel {
    /// Build a kernel from the detector resolution expressed as FWHM (meV).
    pub fn from_fwhm(fwhm: f64, tail_level: f64, tail_lambda: f64) -> Result<Self> {
        if !(fwhm > 0.0) || !fwhm.is_finite() {
            return Err(CoreError::InvalidParam(format!(
                "kernel FWHM must be positive and finite, got {fwhm}"
            )));
        }
        if !(tail_level > 0.0 && tail_level < 1.0) {
            return Err(CoreError::InvalidParam(format!(
                "tail_level must lie in (0, 1), got {tail_level}"
            )));
        }
        if !(tail_lambda > 0.0) || !tail_lambda.is_finite() {
            return Err(CoreError::InvalidParam(format!(
                "tail_lambda must be positive and finite, got {tail_lambda}"
            )));
        }
        Ok(SpectralKernel {
            sigma: fwhm / FWHM_TO_SIGMA,
            tail_level,
            tail_lambda,
        })
    }

    /// Kernel FWHM in meV.
    pub fn fwhm(&self) -> f64 {
        self.sigma * FWHM_TO_SIGMA
    }

    /// Sample the kernel on its support window [-6σ, 6σ + 5λ] with spacing
    /// ≈ σ/4 (clamped to [401, 20001] points) and renormalize to unit
    /// trapezoid area. Returns (offsets, normalized values).
    pub fn samples(&self) -> (Vec<f64>, Vec<f64>) {
        let lo = -6.0 * self.sigma;
        let hi = 6.0 * self.sigma + 5.0 * self.tail_lambda;
        let n = (((hi - lo) / (self.sigma / 4.0)).ceil() as usize).clamp(401, 20001);
        let peak = 1.0 / (self.sigma * (2.0 * std::f64::consts::PI).sqrt());
        let mut eps = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let e = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let gauss = peak * (-0.5 * (e / self.sigma).powi(2)).exp();
            let v = if e <= 0.0 {
                gauss
            } else {
                gauss.max(self.tail_level * peak)
            };
            eps.push(e);
            values.push(v);
        }
        let area = trapezoid(&eps, &values);
        for v in &mut values {
            *v /= area;
        }
        (eps, values)
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 1..x.len() {
        sum += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    }
    sum
}

/// One-photon pair-total rate as a function of detuning at fixed pair
/// energy, convolved with the detector kernel.
///
/// `detuning_over_delta0` carries the output grid in units of the
/// zero-temperature gap Δ₀; the returned vector holds the broadened rate at
/// each grid point. The pair energy, temperature, and coupling come from
/// `op` (its own detuning is ignored in favor of the grid).
pub fn broadened_one_photon(
    mat: &MaterialParams,
    sc: &SuperconductorParams,
    op: &OperatingPoint,
    kernel: &SpectralKernel,
    detuning_over_delta0: &[f64],
) -> Result<Vec<f64>> {
    mat.validate()?;
    sc.validate()?;
    let delta = gap_at_temperature(sc, op.t_kelvin);
    let omega_sum = op.omega_sum();
    let (eps, k_values) = kernel.samples();
    // Pair rate at a given (possibly negative) detuning; even in the sign.
    let pair_rate = |detuning: f64| -> Result<f64> {
        let dom = detuning.abs();
        Ok(rate_one_photon_single(
            mat,
            delta,
            op.t_kelvin,
            0.5 * (omega_sum + dom),
            op.b2,
        )? + rate_one_photon_single(
            mat,
            delta,
            op.t_kelvin,
            0.5 * (omega_sum - dom),
            op.b2,
        )?)
    };
    let mut out = Vec::with_capacity(detuning_over_delta0.len());
    for &x in detuning_over_delta0 {
        let x_mev = x * sc.delta0;
        let mut integrand = Vec::with_capacity(eps.len());
        for (e, k) in eps.iter().zip(k_values.iter()) {
            integrand.push(k * pair_rate(x_mev - e)?);
        }
        out.push(trapezoid(&eps, &integrand));
    }
    Ok(out)
}

/// Unbroadened two-photon Ψ⁺ rate on the same normalized detuning grid, for
/// plotting against the broadened one-photon curve.
pub fn two_photon_spectrum(
    mat: &MaterialParams,
    sc: &SuperconductorParams,
    op: &OperatingPoint,
    detuning_over_delta0: &[f64],
) -> Result<Vec<f64>> {
    mat.validate()?;
    sc.validate()?;
    let delta = gap_at_temperature(sc, op.t_kelvin);
    detuning_over_delta0
        .iter()
        .map(|&x| {
            rate_two_photon(
                mat,
                delta,
                &op.with_detuning(x * sc.delta0),
                BellChannel::PsiPlus,
            )
        })
        .collect()
}

/// Rates averaged over independent Gaussian photon-energy jitter of FWHM
/// `op.bandwidth` on each photon, with the detection purity assembled from
/// the averaged rates. `n_quad` is the Gauss–Hermite order per photon
/// (minimum 9). Zero bandwidth reduces exactly to [`detection_purity`].
pub fn bandwidth_averaged_rates(
    mat: &MaterialParams,
    sc: &SuperconductorParams,
    op: &OperatingPoint,
    n_quad: usize,
) -> Result<RateBreakdown> {
    mat.validate()?;
    sc.validate()?;
    op.validate()?;
    if n_quad < 9 {
        return Err(CoreError::InvalidParam(format!(
            "bandwidth quadrature order must be at least 9, got {n_quad}"
        )));
    }
    let delta = gap_at_temperature(sc, op.t_kelvin);
    if op.bandwidth == 0.0 {
        return detection_purity(mat, delta, op);
    }
    let sigma = op.bandwidth / FWHM_TO_SIGMA;
    let scale = std::f64::consts::SQRT_2 * sigma;
    let (nodes, weights) = gauss_hermite(n_quad)?;
    let mut acc_r1 = 0.0;
    let mut acc_psi = 0.0;
    let mut acc_phi = 0.0;
    for (xi, wi) in nodes.iter().zip(weights.iter()) {
        let omega_mu = op.omega_mu + scale * xi;
        // The single-photon rate only depends on one energy; hoist it out of
        // the inner loop (its Gaussian weight integrates to √π).
        let r1_mu = rate_one_photon_single(mat, delta, op.t_kelvin, omega_mu, op.b2)?;
        for (xj, wj) in nodes.iter().zip(weights.iter()) {
            let omega_nu = op.omega_nu + scale * xj;
            let node_op = OperatingPoint {
                t_kelvin: op.t_kelvin,
                omega_mu,
                omega_nu,
                b2: op.b2,
                bandwidth: 0.0,
            };
            let r1_nu = rate_one_photon_single(mat, delta, op.t_kelvin, omega_nu, op.b2)?;
            let psi = rate_two_photon(mat, delta, &node_op, BellChannel::PsiPlus)?;
            let phi = rate_two_photon(mat, delta, &node_op, BellChannel::PhiPlus)?;
            let w = wi * wj;
            acc_r1 += w * (r1_mu + r1_nu);
            acc_psi += w * psi;
            acc_phi += w * phi;
        }
    }
    let norm = std::f64::consts::PI;
    acc_r1 /= norm;
    acc_psi /= norm;
    acc_phi /= norm;
    let (dp, dp_db, clamped) = assemble_dp(acc_psi + acc_r1, acc_phi + acc_r1);
    Ok(RateBreakdown {
        r1: acc_r1,
        r1_unfloored: acc_r1,
        r2_psi_plus: acc_psi,
        r2_psi_minus: 0.0,
        r2_phi: acc_phi,
        dp,
        dp_db,
        clamped,
    })
}

/// Detection purity with source bandwidth folded in; see
/// [`bandwidth_averaged_rates`].
pub fn dp_with_bandwidth(
    mat: &MaterialParams,
    sc: &SuperconductorParams,
    op: &OperatingPoint,
    n_quad: usize,
) -> Result<f64> {
    Ok(bandwidth_averaged_rates(mat, sc, op, n_quad)?.dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::calibrate_coupling;

    fn setup() -> (MaterialParams, SuperconductorParams, f64) {
        let mat = MaterialParams::ingaas_qw();
        let sc = SuperconductorParams::nb();
        let b2 = calibrate_coupling(&mat, &sc, 1.0e4).unwrap();
        (mat, sc, b2)
    }

    #[test]
    fn kernel_validation_and_normalization() {
        assert!(SpectralKernel::from_fwhm(0.0, 1e-3, 5.0).is_err());
        assert!(SpectralKernel::from_fwhm(0.5, 0.0, 5.0).is_err());
        assert!(SpectralKernel::from_fwhm(0.5, 1.0, 5.0).is_err());
        assert!(SpectralKernel::from_fwhm(0.5, 1e-3, 0.0).is_err());
        let k = SpectralKernel::from_fwhm(0.5, DEFAULT_TAIL_LEVEL, 5.0).unwrap();
        assert!((k.fwhm() - 0.5).abs() < 1e-12);
        let (eps, v) = k.samples();
        assert!(eps.len() >= 401 && eps.len() <= 20001);
        assert!((trapezoid(&eps, &v) - 1.0).abs() < 1e-8);
        // Plateau on the high side: value at +4σ..+5λ stays ≥ tail_level
        // times the (normalized) peak while the low side has decayed away.
        let peak = v.iter().cloned().fold(0.0, f64::max);
        let at = |target: f64| -> f64 {
            let idx = eps
                .iter()
                .enumerate()
                .min_by(|a, b| {
                    (a.1 - target)
                        .abs()
                        .partial_cmp(&(b.1 - target).abs())
                        .unwrap()
                })
                .unwrap()
                .0;
            v[idx]
        };
        assert!(at(10.0 * k.sigma) > 0.9 * DEFAULT_TAIL_LEVEL * peak);
        assert!(at(-5.5 * k.sigma) < 1e-5 * peak);
    }

    #[test]
    fn dirac_limit_recovers_unbroadened_rate() {
        // A vanishingly narrow kernel with a suppressed tail reproduces the
        // bare rate away from spectral edges.
        let (mat, sc, b2) = setup();
        let op = OperatingPoint::from_sum_detuning(
            0.1 * sc.tc,
            mat.hh_bracket_zero_omega_sum(),
            0.0,
            b2,
            0.0,
        );
        let kernel = SpectralKernel::from_fwhm(1e-3, 1e-30, 1e-3).unwrap();
        let grid = [2.2, 2.6, 3.0, 3.5];
        let broad = broadened_one_photon(&mat, &sc, &op, &kernel, &grid).unwrap();
        let delta = gap_at_temperature(&sc, op.t_kelvin);
        for (&x, &b) in grid.iter().zip(broad.iter()) {
            let dom = x * sc.delta0;
            let bare = rate_one_photon_single(
                &mat,
                delta,
                op.t_kelvin,
                0.5 * (op.omega_sum() + dom),
                b2,
            )
            .unwrap()
                + rate_one_photon_single(
                    &mat,
                    delta,
                    op.t_kelvin,
                    0.5 * (op.omega_sum() - dom),
                    b2,
                )
                .unwrap();
            assert!(
                ((b - bare) / bare).abs() < 1e-5,
                "x = {x}: broadened {b:e} vs bare {bare:e}"
            );
        }
    }

    #[test]
    fn midgap_level_decreases_with_resolution_width() {
        // The sub-gap plateau level is set by tail_level times the kernel
        // peak (∝ 1/σ), so a coarser resolution lowers the mid-gap floor.
        let (mat, sc, b2) = setup();
        let op = OperatingPoint::from_sum_detuning(
            0.1 * sc.tc,
            mat.hh_bracket_zero_omega_sum(),
            0.0,
            b2,
            0.0,
        );
        let grid = [0.04];
        let mut previous = f64::INFINITY;
        for fwhm in [0.3, 0.5, 1.0] {
            let kernel =
                SpectralKernel::from_fwhm(fwhm, DEFAULT_TAIL_LEVEL, DEFAULT_TAIL_LAMBDA_MEV)
                    .unwrap();
            let level = broadened_one_photon(&mat, &sc, &op, &kernel, &grid).unwrap()[0];
            assert!(
                level < previous,
                "mid-gap level did not decrease at FWHM {fwhm}: {level:e} !< {previous:e}"
            );
            previous = level;
        }
    }

    #[test]
    fn zero_bandwidth_matches_monochromatic_purity() {
        let (mat, sc, b2) = setup();
        let t = 0.2 * sc.tc;
        let delta = gap_at_temperature(&sc, t);
        let op = OperatingPoint::from_sum_detuning(
            t,
            mat.hh_bracket_zero_omega_sum(),
            0.3 * delta,
            b2,
            0.0,
        );
        let averaged = bandwidth_averaged_rates(&mat, &sc, &op, 21).unwrap();
        let direct = detection_purity(&mat, delta, &op).unwrap();
        assert_eq!(averaged.dp, direct.dp);
        assert_eq!(averaged.r1, direct.r1);
    }

    #[test]
    fn small_bandwidth_is_continuous() {
        let (mat, sc, b2) = setup();
        let t = 0.2 * sc.tc;
        let delta = gap_at_temperature(&sc, t);
        for dom_frac in [0.2, 0.3, 0.5] {
            let op0 = OperatingPoint::from_sum_detuning(
                t,
                mat.hh_bracket_zero_omega_sum(),
                dom_frac * delta,
                b2,
                0.0,
            );
            let mut op_eps = op0;
            op_eps.bandwidth = 1e-4;
            let dp0 = dp_with_bandwidth(&mat, &sc, &op0, 21).unwrap();
            let dp_eps = dp_with_bandwidth(&mat, &sc, &op_eps, 21).unwrap();
            assert!(
                ((dp_eps - dp0) / dp0).abs() < 1e-4,
                "dp jump at bw → 0: {dp0:e} vs {dp_eps:e}"
            );
        }
    }

    /// Operating point where the bandwidth average is analytic over the whole
    /// Gaussian reach: detuning 4Δ keeps every node above the one-photon
    /// absorption edge, and the 0.15 meV bandwidth keeps the reach well
    /// inside the ring where the two-photon denominator would cross zero.
    /// Pole crossings make the average genuinely quadrature-sensitive (that
    /// sensitivity is the physics of purity collapse under bandwidth), so
    /// convergence can only be demanded away from them.
    fn smooth_bandwidth_op(
        mat: &MaterialParams,
        sc: &SuperconductorParams,
        b2: f64,
        bandwidth: f64,
    ) -> (f64, OperatingPoint) {
        let t = 0.3 * sc.tc;
        let delta = gap_at_temperature(sc, t);
        let op = OperatingPoint::from_sum_detuning(
            t,
            mat.hh_bracket_zero_omega_sum(),
            4.0 * delta,
            b2,
            bandwidth,
        );
        (delta, op)
    }

    #[test]
    fn bandwidth_quadrature_converges_and_validates() {
        let (mat, sc, b2) = setup();
        let (_, op) = smooth_bandwidth_op(&mat, &sc, b2, 0.15);
        assert!(bandwidth_averaged_rates(&mat, &sc, &op, 8).is_err());
        let a = bandwidth_averaged_rates(&mat, &sc, &op, 21).unwrap();
        let b = bandwidth_averaged_rates(&mat, &sc, &op, 42).unwrap();
        for (ra, rb) in [(a.r1, b.r1), (a.r2_psi_plus, b.r2_psi_plus), (a.dp, b.dp)] {
            assert!(
                ((ra - rb) / rb).abs() < 1e-10,
                "quadrature not converged: {ra:e} vs {rb:e}"
            );
        }
        // The mixed channel is dead over the whole reach at this pair energy.
        assert_eq!(a.r2_phi, 0.0);
    }

    #[test]
    fn bandwidth_average_agrees_with_trapezoid_reference() {
        // Independent check of the Gauss–Hermite average against a dense
        // trapezoid quadrature over ±7σ on each photon.
        let (mat, sc, b2) = setup();
        let (delta, op) = smooth_bandwidth_op(&mat, &sc, b2, 0.15);
        let t = op.t_kelvin;
        let gh = bandwidth_averaged_rates(&mat, &sc, &op, 21).unwrap();
        let sigma = op.bandwidth / FWHM_TO_SIGMA;
        let n = 801;
        let mut weights = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n);
        for i in 0..n {
            let x = -7.0 + 14.0 * i as f64 / (n - 1) as f64;
            let w = (-0.5 * x * x).exp() * if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            offsets.push(x * sigma);
            weights.push(w);
        }
        let wsum: f64 = weights.iter().sum();
        let mut acc = [0.0; 3];
        for (di, wi) in offsets.iter().zip(weights.iter()) {
            for (dj, wj) in offsets.iter().zip(weights.iter()) {
                let node_op = OperatingPoint {
                    t_kelvin: t,
                    omega_mu: op.omega_mu + di,
                    omega_nu: op.omega_nu + dj,
                    b2,
                    bandwidth: 0.0,
                };
                let w = wi * wj / (wsum * wsum);
                acc[0] += w * crate::rates::rate_one_photon(&mat, delta, &node_op).unwrap();
                acc[1] += w
                    * rate_two_photon(&mat, delta, &node_op, BellChannel::PsiPlus).unwrap();
                acc[2] += w
                    * rate_two_photon(&mat, delta, &node_op, BellChannel::PhiPlus).unwrap();
            }
        }
        let dp_ref = (acc[1] + acc[0]) / (acc[2] + acc[0]);
        assert!(
            ((gh.dp - dp_ref) / dp_ref).abs() < 1e-6,
            "GH {g} vs trapezoid {dp_ref}",
            g = gh.dp
        );
    }
}
