//! Grid sweeps over operating parameters: cell evaluation with diagnostic
//! flags, a worker pool of configurable size, and deterministic row order.

use anyhow::{anyhow, Context, Result};
use rayon::prelude::*;

use bsa_core::material::{Band, MaterialParams, OperatingPoint};
use bsa_core::rates::{phi_threshold, psi_threshold, RateBreakdown};
use bsa_core::spectral::{bandwidth_averaged_rates, broadened_one_photon, two_photon_spectrum, SpectralKernel};

use crate::config::{Axis, Effective};
use crate::output::{Field, Row, Table};

/// The cell's detuning was shifted off an exact resonance pole by
/// [`RESONANCE_NUDGE_MEV`] to obtain a finite value.
pub const FLAG_RESONANCE_PERTURBED: u32 = 1;
/// The purity in dB exceeded the representable cap and was clamped.
pub const FLAG_DP_CLAMPED: u32 = 2;
/// The pair energy sits within [`THRESHOLD_TOLERANCE_MEV`] of a channel
/// threshold, where a step discontinuity makes the cell edge-sensitive.
pub const FLAG_THRESHOLD_BOUNDARY: u32 = 4;

/// Detuning shift applied to exactly resonant cells, meV.
pub const RESONANCE_NUDGE_MEV: f64 = 1.0e-9;
/// Half-width of the threshold-boundary flag window, meV.
pub const THRESHOLD_TOLERANCE_MEV: f64 = 1.0e-9;

/// One evaluated sweep cell.
struct Cell {
    x: f64,
    y: f64,
    rates: RateBreakdown,
    flags: u32,
}

/// Apply one axis value to the per-cell parameters.
fn apply_axis(
    axis: Axis,
    value: f64,
    mat: &mut MaterialParams,
    t_kelvin: &mut f64,
    detuning: &mut f64,
    bandwidth: &mut f64,
    eff: &Effective,
) {
    match axis {
        Axis::TemperatureOverTc => *t_kelvin = value * eff.superconductor.tc,
        Axis::DetuningOverDelta0 => *detuning = value * eff.superconductor.delta0,
        Axis::SplittingOverMun => mat.dw_p = value * mat.mu_n,
        Axis::DetuningOverMun => *detuning = value * mat.mu_n,
        Axis::BandwidthOverMun => *bandwidth = value * mat.mu_n,
    }
}

fn eval_cell(eff: &Effective, x: f64, y: f64) -> Result<Cell> {
    let sweep = eff.sweep.as_ref().expect("caller checked the sweep exists");
    let mut mat = eff.material.clone();
    let mut t_kelvin = eff.t_kelvin;
    let mut detuning = eff.detuning;
    let mut bandwidth = eff.bandwidth;
    apply_axis(
        sweep.x_axis,
        x,
        &mut mat,
        &mut t_kelvin,
        &mut detuning,
        &mut bandwidth,
        eff,
    );
    apply_axis(
        sweep.y_axis,
        y,
        &mut mat,
        &mut t_kelvin,
        &mut detuning,
        &mut bandwidth,
        eff,
    );
    let mut flags = 0;
    let thresholds = [
        psi_threshold(&mat, Band::LightHole),
        psi_threshold(&mat, Band::HeavyHole),
        phi_threshold(&mat),
    ];
    if thresholds
        .iter()
        .any(|thr| (eff.omega_sum - thr).abs() < THRESHOLD_TOLERANCE_MEV)
    {
        flags |= FLAG_THRESHOLD_BOUNDARY;
    }
    let op = OperatingPoint::from_sum_detuning(t_kelvin, eff.omega_sum, detuning, eff.b2, bandwidth);
    let mut rates = bandwidth_averaged_rates(&mat, &eff.superconductor, &op, eff.kernel.n_quad)
        .map_err(|e| anyhow!("cell (x={x}, y={y}): {e}"))?;
    if !rates.r1.is_finite() || !rates.r2_psi_plus.is_finite() || !rates.r2_phi.is_finite() {
        // An exactly resonant denominator: nudge the detuning off the pole
        // and flag the cell rather than emitting a silent infinity.
        let nudged = op.with_detuning(detuning + RESONANCE_NUDGE_MEV);
        rates = bandwidth_averaged_rates(&mat, &eff.superconductor, &nudged, eff.kernel.n_quad)
            .map_err(|e| anyhow!("cell (x={x}, y={y}), perturbed: {e}"))?;
        flags |= FLAG_RESONANCE_PERTURBED;
    }
    if rates.clamped {
        flags |= FLAG_DP_CLAMPED;
    }
    Ok(Cell {
        x,
        y,
        rates,
        flags,
    })
}

/// Run the configured 2-D sweep on `jobs` workers (0 = one per core) and
/// assemble the output table in row-major grid order (x outer, y inner),
/// independent of the worker count.
pub fn run_map(eff: &Effective, jobs: usize) -> Result<Table> {
    let sweep = eff
        .sweep
        .as_ref()
        .context("this command needs a [sweep] section (or --set sweep.* overrides)")?;
    let xs = sweep.x_range.values();
    let ys = sweep.y_range.values();
    let points: Vec<(f64, f64)> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building worker pool")?;
    let cells: Result<Vec<Cell>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(x, y)| eval_cell(eff, x, y))
            .collect()
    });
    let columns = vec![
        sweep.x_axis.label().to_string(),
        sweep.y_axis.label().to_string(),
        "r1(s^-1)".to_string(),
        "r2_psi_plus(s^-1)".to_string(),
        "r2_psi_minus(s^-1)".to_string(),
        "r2_phi(s^-1)".to_string(),
        "dp(1)".to_string(),
        "dp_db(dB)".to_string(),
        "flags(bitmask)".to_string(),
    ];
    let rows = cells?
        .into_iter()
        .map(|c| {
            Row(vec![
                Field::Num(c.x),
                Field::Num(c.y),
                Field::Num(c.rates.r1),
                Field::Num(c.rates.r2_psi_plus),
                Field::Num(c.rates.r2_psi_minus),
                Field::Num(c.rates.r2_phi),
                Field::Num(c.rates.dp),
                Field::Num(c.rates.dp_db),
                Field::Flags(c.flags),
            ])
        })
        .collect();
    Ok(Table { columns, rows })
}

/// Compute the absorption spectrum table: one broadened one-photon column
/// per configured detector resolution plus the unbroadened two-photon
/// column, every column normalized to the two-photon grid peak.
// `!(peak > 0.0)` (rather than `peak <= 0.0`) also rejects a NaN peak.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn run_spectrum(eff: &Effective) -> Result<Table> {
    let grid = eff.kernel.grid.values();
    let op = OperatingPoint::from_sum_detuning(
        eff.t_kelvin,
        eff.omega_sum,
        eff.detuning,
        eff.b2,
        0.0,
    );
    let two = two_photon_spectrum(&eff.material, &eff.superconductor, &op, &grid)
        .map_err(|e| anyhow!("two-photon spectrum: {e}"))?;
    let peak = two.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(anyhow!(
            "two-photon spectrum peak is {peak:e}; cannot normalize \
             (is the gap closed, or the grid on a resonance?)"
        ));
    }
    let mut one_photon_columns = Vec::with_capacity(eff.kernel.fwhm.len());
    for &fwhm in &eff.kernel.fwhm {
        let kernel = SpectralKernel::from_fwhm(fwhm, eff.kernel.tail_level, eff.kernel.tail_lambda)
            .map_err(|e| anyhow!("kernel for FWHM {fwhm}: {e}"))?;
        let column = broadened_one_photon(&eff.material, &eff.superconductor, &op, &kernel, &grid)
            .map_err(|e| anyhow!("one-photon spectrum at FWHM {fwhm}: {e}"))?;
        one_photon_columns.push(column);
    }
    let mut columns = vec!["energy_over_delta0(1)".to_string()];
    for &fwhm in &eff.kernel.fwhm {
        columns.push(format!("one_photon_fwhm_{fwhm}meV(norm)"));
    }
    columns.push("two_photon(norm)".to_string());
    let rows = grid
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let mut fields = vec![Field::Num(x)];
            for column in &one_photon_columns {
                fields.push(Field::Num(column[i] / peak));
            }
            fields.push(Field::Num(two[i] / peak));
            Row(fields)
        })
        .collect();
    Ok(Table { columns, rows })
}
