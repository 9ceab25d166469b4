//! `bsa` — Bell-state analyzer rate model, command-line front end.
//!
//! Subcommands: `dp-map`, `spectrum`, `bandwidth-map`, `convert-bell`,
//! `validate`, `materials`. Exit codes: 0 ok, 1 usage, 2 configuration,
//! 3 validation failure.

mod config;
mod output;
mod sweep;
mod validate;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use bsa_core::bell::{conversion_table, StateId};
use bsa_core::material::{MaterialParams, SuperconductorParams};
use bsa_core::rates::BellChannel;

use config::{Axis, OutputFormat};
use output::{Field, Row, Table};

#[derive(Parser)]
#[command(
    name = "bsa",
    version,
    about = "Bell-state analyzer: hole-generation rates, detection purity, \
             absorption spectra, and Bell-conversion optics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output path; "-" writes to stdout (the default).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,
    /// Output format (default csv).
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads for sweeps; 0 means one per core.
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    jobs: usize,
    /// Superconductor preset; replaces the superconductor config section.
    #[arg(long = "preset-sc", global = true, value_name = "NAME")]
    preset_sc: Option<String>,
    /// Material preset; replaces the material config section.
    #[arg(long = "preset-mat", global = true, value_name = "NAME")]
    preset_mat: Option<String>,
    /// Dotted-key override, e.g. --set operating.t_kelvin=1.85 (repeatable;
    /// wins over the config file).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Print the effective configuration as TOML and exit.
    #[arg(long, global = true)]
    dump_config: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Detection-purity map over the configured two-axis sweep grid.
    DpMap,
    /// Detector-broadened one-photon spectra plus the two-photon spectrum.
    Spectrum,
    /// Purity map with one sweep axis carrying the source bandwidth.
    BandwidthMap,
    /// Bell-state conversion table of the waveplate chain.
    ConvertBell,
    /// Check closed-form rates against k-space sums; exit 3 on disagreement.
    Validate,
    /// List built-in material and superconductor presets.
    Materials,
}

fn channel_name(channel: BellChannel) -> &'static str {
    match channel {
        BellChannel::PsiPlus => "psi_plus",
        BellChannel::PsiMinus => "psi_minus",
        BellChannel::PhiPlus => "phi_plus",
        BellChannel::PhiMinus => "phi_minus",
    }
}

fn state_name(state: StateId) -> &'static str {
    match state {
        StateId::Bell(channel) => channel_name(channel),
        StateId::Other => "other",
    }
}

fn convert_bell_table() -> Result<Table> {
    let rows = conversion_table().context("evaluating the conversion chain")?;
    Ok(Table {
        columns: vec![
            "input(state)".to_string(),
            "hwp_angle(deg)".to_string(),
            "output(state)".to_string(),
            "fidelity(1)".to_string(),
        ],
        rows: rows
            .into_iter()
            .map(|r| {
                Row(vec![
                    Field::Text(channel_name(r.input).to_string()),
                    Field::Num(r.hwp_deg),
                    Field::Text(state_name(r.output).to_string()),
                    Field::Num(r.fidelity),
                ])
            })
            .collect(),
    })
}

fn materials_table() -> Table {
    let mut rows = Vec::new();
    for name in SuperconductorParams::PRESET_NAMES {
        let sc = SuperconductorParams::preset(name).expect("listed preset resolves");
        rows.push(Row(vec![
            Field::Text((*name).to_string()),
            Field::Text("superconductor".to_string()),
            Field::Text(format!("delta0={}meV tc={}K", sc.delta0, sc.tc)),
        ]));
    }
    for name in MaterialParams::PRESET_NAMES {
        let m = MaterialParams::preset(name).expect("listed preset resolves");
        rows.push(Row(vec![
            Field::Text((*name).to_string()),
            Field::Text("semiconductor".to_string()),
            Field::Text(format!(
                "e_g={}meV m_n={} m_lh={} m_hh={} mu_p={}meV dw_p={}meV \
                 mu_n={}meV s_area={}cm^2 v_g={:e}cm/s",
                m.e_g, m.m_n, m.m_lh, m.m_hh, m.mu_p, m.dw_p, m.mu_n, m.s_area, m.v_g
            )),
        ]));
    }
    Table {
        columns: vec![
            "preset(name)".to_string(),
            "kind(1)".to_string(),
            "parameters(text)".to_string(),
        ],
        rows,
    }
}

fn execute(cli: Cli) -> Result<i32> {
    let eff = config::load(
        cli.config.as_deref(),
        cli.preset_mat.as_deref(),
        cli.preset_sc.as_deref(),
        &cli.set,
        cli.out.as_deref(),
        cli.format,
    )?;
    if cli.dump_config {
        print!("{}", eff.dump()?);
        return Ok(0);
    }
    match cli.command {
        Command::DpMap => {
            let table = sweep::run_map(&eff, cli.jobs)?;
            output::write(&table, eff.format, eff.out_path.as_deref())?;
            Ok(0)
        }
        Command::BandwidthMap => {
            let s = eff
                .sweep
                .as_ref()
                .context("bandwidth-map needs a [sweep] section")?;
            if s.x_axis != Axis::BandwidthOverMun && s.y_axis != Axis::BandwidthOverMun {
                bail!("bandwidth-map expects one sweep axis to be bandwidth_over_mun");
            }
            let table = sweep::run_map(&eff, cli.jobs)?;
            output::write(&table, eff.format, eff.out_path.as_deref())?;
            Ok(0)
        }
        Command::Spectrum => {
            let table = sweep::run_spectrum(&eff)?;
            output::write(&table, eff.format, eff.out_path.as_deref())?;
            Ok(0)
        }
        Command::ConvertBell => {
            let table = convert_bell_table()?;
            output::write(&table, eff.format, eff.out_path.as_deref())?;
            Ok(0)
        }
        Command::Materials => {
            let table = materials_table();
            output::write(&table, eff.format, eff.out_path.as_deref())?;
            Ok(0)
        }
        Command::Validate => {
            let checks = validate::run(&eff)?;
            let mut all_pass = true;
            for check in &checks {
                println!(
                    "{}: {} ({})",
                    check.name,
                    if check.pass { "PASS" } else { "FAIL" },
                    check.detail
                );
                all_pass &= check.pass;
            }
            Ok(if all_pass { 0 } else { 3 })
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match execute(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}
