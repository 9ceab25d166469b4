//! Run configuration: TOML file schema, preset resolution, flag overrides,
//! and the fully resolved form consumed by the sweep drivers.
//!
//! Precedence, lowest to highest: built-in defaults, the `--config` file,
//! `--preset-mat`/`--preset-sc` (each replaces its whole section), `--set`
//! dotted-key overrides in order, then `--out`/`--format`.

use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use bsa_core::material::{MaterialParams, SuperconductorParams};
use bsa_core::rates::calibrate_coupling;
use bsa_core::spectral::{DEFAULT_TAIL_LAMBDA_MEV, DEFAULT_TAIL_LEVEL};

/// Sweep axis selector; values are dimensionless ratios against the named
/// reference scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Temperature in units of the critical temperature Tc.
    TemperatureOverTc,
    /// Photon detuning in units of the zero-temperature gap Δ₀.
    DetuningOverDelta0,
    /// Hole-band splitting Δω_p in units of the electron chemical potential μ_n.
    SplittingOverMun,
    /// Photon detuning in units of μ_n.
    DetuningOverMun,
    /// Source bandwidth (FWHM) in units of μ_n.
    BandwidthOverMun,
}

impl Axis {
    /// Column header for this axis, units in parentheses (all ratios).
    pub fn label(self) -> &'static str {
        match self {
            Axis::TemperatureOverTc => "temperature_over_tc(1)",
            Axis::DetuningOverDelta0 => "detuning_over_delta0(1)",
            Axis::SplittingOverMun => "splitting_over_mun(1)",
            Axis::DetuningOverMun => "detuning_over_mun(1)",
            Axis::BandwidthOverMun => "bandwidth_over_mun(1)",
        }
    }
}

/// Output serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// An axis range `[lo, hi, n]`: `n` points linearly spaced from `lo` to `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRange(pub f64, pub f64, pub usize);

impl GridRange {
    fn validate(&self, what: &str) -> Result<()> {
        let GridRange(lo, hi, n) = *self;
        if !lo.is_finite() || !hi.is_finite() {
            bail!("{what}: range endpoints must be finite, got [{lo}, {hi}]");
        }
        if lo >= hi {
            bail!("{what}: range must have lo < hi, got [{lo}, {hi}]");
        }
        if n < 2 {
            bail!("{what}: a range needs at least 2 points, got {n}");
        }
        Ok(())
    }

    /// The `n` linearly spaced sample values.
    pub fn values(&self) -> Vec<f64> {
        let GridRange(lo, hi, n) = *self;
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

// ---------------------------------------------------------------------------
// File schema
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub material: MaterialSection,
    #[serde(default)]
    pub superconductor: SuperconductorSection,
    #[serde(default)]
    pub operating: OperatingSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub kernel: KernelSection,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// Semiconductor: a preset name, a full inline parameter set, or a preset
/// with individual fields overridden.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_lh: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_hh: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dw_p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_area: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_g: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperconductorSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tc: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatingSection {
    /// Temperature in kelvin. Default 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_kelvin: Option<f64>,
    /// Pair energy ω_μ + ω_ν in meV. Default: the heavy-hole bracket-zero
    /// pair energy of the resolved material.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_sum: Option<f64>,
    /// Photon detuning ω_μ − ω_ν in meV. Default 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detuning: Option<f64>,
    /// Squared coupling B² in meV⁴. Default: calibrated so the reference
    /// absorption coefficient equals `alpha_target`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2: Option<f64>,
    /// Calibration target for the absorption coefficient, cm⁻¹. Default 1e4.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_target: Option<f64>,
    /// Source bandwidth (FWHM per photon) in meV. Default 0 (monochromatic).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub x_axis: Axis,
    pub x_range: GridRange,
    pub y_axis: Axis,
    pub y_range: GridRange,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    /// Detector resolutions (FWHM, meV); the spectrum emits one one-photon
    /// column per value. Default [0.3, 0.5, 1.0].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fwhm: Option<Vec<f64>>,
    /// High-energy plateau height as a fraction of the kernel peak.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_level: Option<f64>,
    /// Plateau decay length, meV.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_lambda: Option<f64>,
    /// Spectrum photon-detuning grid in units of Δ₀. Default [0.04, 4.04, 51].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridRange>,
    /// Gauss–Hermite order per photon for bandwidth averaging. Default 21.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_quad: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    /// Radial grid points of the k-space sums. Default 20000.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_k: Option<usize>,
    /// Grid extent in units of the Fermi wavevector. Default 8.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<f64>,
    /// Smearing width η in units of Δ₀. Default 0.02.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_over_delta0: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Output file path; "-" or absent writes to stdout.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// csv (default) or json.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
}

// ---------------------------------------------------------------------------
// Flag overrides on the raw TOML table
// ---------------------------------------------------------------------------

/// Parse the value side of a `--set key=value` as a TOML scalar (or array);
/// anything unparseable is taken as a bare string.
fn parse_scalar(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|t| t.get("v").cloned())
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

/// Apply one `--set section.key=value` override to the raw config table.
pub fn apply_set_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .with_context(|| format!("--set expects key=value, got {assignment:?}"))?;
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        bail!("--set key {path:?} has an empty path segment");
    }
    let (last, parents) = keys.split_last().expect("split yields at least one key");
    let mut cur = table;
    for key in parents {
        cur = cur
            .entry(key.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .with_context(|| format!("--set path {path:?}: {key:?} is not a table"))?;
    }
    cur.insert(last.to_string(), parse_scalar(raw));
    Ok(())
}

/// Replace a whole section with just a preset name (used by `--preset-mat`
/// and `--preset-sc`, which win over the file's section).
pub fn replace_with_preset(table: &mut toml::Table, section: &str, preset: &str) {
    let mut inner = toml::Table::new();
    inner.insert(
        "preset".to_string(),
        toml::Value::String(preset.to_string()),
    );
    table.insert(section.to_string(), toml::Value::Table(inner));
}

// ---------------------------------------------------------------------------
// Resolution to runnable values
// ---------------------------------------------------------------------------

/// Kernel parameters with defaults applied.
#[derive(Debug, Clone)]
pub struct ResolvedKernel {
    pub fwhm: Vec<f64>,
    pub tail_level: f64,
    pub tail_lambda: f64,
    pub grid: GridRange,
    pub n_quad: usize,
}

/// Oracle discretization with defaults applied; `eta` is in meV.
#[derive(Debug, Clone, Copy)]
pub struct ResolvedOracle {
    pub n_k: usize,
    pub k_max: f64,
    pub eta: f64,
}

/// Fully resolved configuration: presets expanded, defaults applied, the
/// coupling calibrated. Everything a subcommand needs.
#[derive(Debug, Clone)]
pub struct Effective {
    pub material: MaterialParams,
    pub superconductor: SuperconductorParams,
    pub t_kelvin: f64,
    pub omega_sum: f64,
    pub detuning: f64,
    pub b2: f64,
    pub alpha_target: f64,
    pub bandwidth: f64,
    pub sweep: Option<SweepSection>,
    pub kernel: ResolvedKernel,
    pub oracle: ResolvedOracle,
    pub out_path: Option<String>,
    pub format: OutputFormat,
}

fn resolve_material(section: &MaterialSection) -> Result<MaterialParams> {
    let mut mat = match &section.preset {
        Some(name) => MaterialParams::preset(name).ok_or_else(|| {
            anyhow!(
                "unknown material preset {name:?}; available: {}",
                MaterialParams::PRESET_NAMES.join(", ")
            )
        })?,
        None => {
            let all_inline = [
                section.e_g,
                section.m_n,
                section.m_lh,
                section.m_hh,
                section.mu_p,
                section.dw_p,
                section.mu_n,
                section.s_area,
                section.v_g,
            ];
            if all_inline.iter().all(Option::is_some) {
                MaterialParams {
                    e_g: section.e_g.unwrap(),
                    m_n: section.m_n.unwrap(),
                    m_lh: section.m_lh.unwrap(),
                    m_hh: section.m_hh.unwrap(),
                    mu_p: section.mu_p.unwrap(),
                    dw_p: section.dw_p.unwrap(),
                    mu_n: section.mu_n.unwrap(),
                    s_area: section.s_area.unwrap(),
                    v_g: section.v_g.unwrap(),
                }
            } else if all_inline.iter().all(Option::is_none) {
                // Nothing specified at all: fall back to the quantum-well preset.
                MaterialParams::ingaas_qw()
            } else {
                bail!(
                    "[material]: give a preset, a full inline parameter set, \
                     or a preset plus individual overrides"
                );
            }
        }
    };
    if section.preset.is_some() {
        // Individual fields override the preset.
        if let Some(v) = section.e_g {
            mat.e_g = v;
        }
        if let Some(v) = section.m_n {
            mat.m_n = v;
        }
        if let Some(v) = section.m_lh {
            mat.m_lh = v;
        }
        if let Some(v) = section.m_hh {
            mat.m_hh = v;
        }
        if let Some(v) = section.mu_p {
            mat.mu_p = v;
        }
        if let Some(v) = section.dw_p {
            mat.dw_p = v;
        }
        if let Some(v) = section.mu_n {
            mat.mu_n = v;
        }
        if let Some(v) = section.s_area {
            mat.s_area = v;
        }
        if let Some(v) = section.v_g {
            mat.v_g = v;
        }
    }
    mat.validate()
        .map_err(|e| anyhow!("[material]: invalid parameters: {e}"))?;
    Ok(mat)
}

fn resolve_superconductor(section: &SuperconductorSection) -> Result<SuperconductorParams> {
    let mut sc = match &section.preset {
        Some(name) => SuperconductorParams::preset(name).ok_or_else(|| {
            anyhow!(
                "unknown superconductor preset {name:?}; available: {}",
                SuperconductorParams::PRESET_NAMES.join(", ")
            )
        })?,
        None => match (section.delta0, section.tc) {
            (Some(delta0), Some(tc)) => SuperconductorParams { delta0, tc },
            (None, None) => SuperconductorParams::nb(),
            _ => bail!("[superconductor]: give a preset or both delta0 and tc"),
        },
    };
    if section.preset.is_some() {
        if let Some(v) = section.delta0 {
            sc.delta0 = v;
        }
        if let Some(v) = section.tc {
            sc.tc = v;
        }
    }
    sc.validate()
        .map_err(|e| anyhow!("[superconductor]: invalid parameters: {e}"))?;
    Ok(sc)
}

impl ConfigFile {
    /// Resolve presets and defaults into runnable values and calibrate the
    /// coupling if none was given.
    pub fn resolve(&self) -> Result<Effective> {
        let material = resolve_material(&self.material)?;
        let superconductor = resolve_superconductor(&self.superconductor)?;
        let alpha_target = self.operating.alpha_target.unwrap_or(1.0e4);
        let b2 = match self.operating.b2 {
            Some(b2) => b2,
            None => calibrate_coupling(&material, &superconductor, alpha_target)
                .map_err(|e| anyhow!("coupling calibration failed: {e}"))?,
        };
        if let Some(sweep) = &self.sweep {
            sweep.x_range.validate("sweep.x_range")?;
            sweep.y_range.validate("sweep.y_range")?;
            if sweep.x_axis == sweep.y_axis {
                bail!("sweep axes must be distinct, both are {:?}", sweep.x_axis);
            }
        }
        let kernel = ResolvedKernel {
            fwhm: self
                .kernel
                .fwhm
                .clone()
                .unwrap_or_else(|| vec![0.3, 0.5, 1.0]),
            tail_level: self.kernel.tail_level.unwrap_or(DEFAULT_TAIL_LEVEL),
            tail_lambda: self.kernel.tail_lambda.unwrap_or(DEFAULT_TAIL_LAMBDA_MEV),
            grid: self.kernel.grid.unwrap_or(GridRange(0.04, 4.04, 51)),
            n_quad: self.kernel.n_quad.unwrap_or(21),
        };
        if kernel.fwhm.is_empty() {
            bail!("kernel.fwhm needs at least one resolution value");
        }
        kernel.grid.validate("kernel.grid")?;
        let oracle = ResolvedOracle {
            n_k: self.oracle.n_k.unwrap_or(20_000),
            k_max: self.oracle.k_max.unwrap_or(8.0),
            eta: self.oracle.eta_over_delta0.unwrap_or(0.02) * superconductor.delta0,
        };
        let omega_sum = self
            .operating
            .omega_sum
            .unwrap_or_else(|| material.hh_bracket_zero_omega_sum());
        Ok(Effective {
            material,
            superconductor,
            t_kelvin: self.operating.t_kelvin.unwrap_or(0.0),
            omega_sum,
            detuning: self.operating.detuning.unwrap_or(0.0),
            b2,
            alpha_target,
            bandwidth: self.operating.bandwidth.unwrap_or(0.0),
            sweep: self.sweep.clone(),
            kernel,
            oracle,
            out_path: match self.output.path.as_deref() {
                None | Some("-") => None,
                Some(p) => Some(p.to_string()),
            },
            format: self.output.format.unwrap_or(OutputFormat::Csv),
        })
    }
}

impl Effective {
    /// The effective configuration as a fully explicit config file: presets
    /// expanded inline, every default spelled out, the calibrated coupling
    /// pinned. Re-running from this dump reproduces the run bit for bit.
    pub fn to_config_file(&self) -> ConfigFile {
        ConfigFile {
            material: MaterialSection {
                preset: None,
                e_g: Some(self.material.e_g),
                m_n: Some(self.material.m_n),
                m_lh: Some(self.material.m_lh),
                m_hh: Some(self.material.m_hh),
                mu_p: Some(self.material.mu_p),
                dw_p: Some(self.material.dw_p),
                mu_n: Some(self.material.mu_n),
                s_area: Some(self.material.s_area),
                v_g: Some(self.material.v_g),
            },
            superconductor: SuperconductorSection {
                preset: None,
                delta0: Some(self.superconductor.delta0),
                tc: Some(self.superconductor.tc),
            },
            operating: OperatingSection {
                t_kelvin: Some(self.t_kelvin),
                omega_sum: Some(self.omega_sum),
                detuning: Some(self.detuning),
                b2: Some(self.b2),
                alpha_target: Some(self.alpha_target),
                bandwidth: Some(self.bandwidth),
            },
            sweep: self.sweep.clone(),
            kernel: KernelSection {
                fwhm: Some(self.kernel.fwhm.clone()),
                tail_level: Some(self.kernel.tail_level),
                tail_lambda: Some(self.kernel.tail_lambda),
                grid: Some(self.kernel.grid),
                n_quad: Some(self.kernel.n_quad),
            },
            oracle: OracleSection {
                n_k: Some(self.oracle.n_k),
                k_max: Some(self.oracle.k_max),
                eta_over_delta0: Some(self.oracle.eta / self.superconductor.delta0),
            },
            output: OutputSection {
                path: Some(self.out_path.clone().unwrap_or_else(|| "-".to_string())),
                format: Some(self.format),
            },
        }
    }

    /// Serialize the effective configuration as TOML.
    pub fn dump(&self) -> Result<String> {
        toml::to_string_pretty(&self.to_config_file()).context("serializing effective config")
    }
}

/// Load the layered configuration: file (if any), then preset flags, then
/// `--set` overrides, then output flags — and resolve it.
#[allow(clippy::too_many_arguments)]
pub fn load(
    config_path: Option<&std::path::Path>,
    preset_mat: Option<&str>,
    preset_sc: Option<&str>,
    sets: &[String],
    out: Option<&str>,
    format: Option<OutputFormat>,
) -> Result<Effective> {
    let mut table = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config file {}", path.display()))?;
            text.parse::<toml::Table>()
                .with_context(|| format!("parsing config file {}", path.display()))?
        }
        None => toml::Table::new(),
    };
    if let Some(name) = preset_mat {
        replace_with_preset(&mut table, "material", name);
    }
    if let Some(name) = preset_sc {
        replace_with_preset(&mut table, "superconductor", name);
    }
    for assignment in sets {
        apply_set_override(&mut table, assignment)?;
    }
    let file: ConfigFile = toml::Value::Table(table)
        .try_into()
        .context("config does not match the expected schema")?;
    let mut eff = file.resolve()?;
    if let Some(path) = out {
        eff.out_path = if path == "-" {
            None
        } else {
            Some(path.to_string())
        };
    }
    if let Some(fmt) = format {
        eff.format = fmt;
    }
    Ok(eff)
}
