//! Plain-Rust layer under the Python bindings. Everything returns named
//! scalars so the wrappers only convert containers.

use std::f64::consts::TAU;

use cavity_lambda_sim::limits::{linewidth, DesignRules, DEFAULT_A_MARGIN};
use cavity_lambda_sim::oracle::kernel_photon_numbers;
use cavity_lambda_sim::response::{self, InputMode};
use cavity_lambda_sim::scenario::energy::{asymptotic_efficiency, EnergyMap, CS_CALIBRATED_DIPOLE};
use cavity_lambda_sim::scenario::report::{write_limits_csv, write_scan_csv};
use cavity_lambda_sim::scenario::scan::limits_table;
use cavity_lambda_sim::scenario::{cs_preset, run_scan, Preset, ScanConfig, ScanOptions};
use cavity_lambda_sim::{ControlParams, Error, MemoryModel, Result};

pub type Record = Vec<(&'static str, f64)>;

pub fn input_mode(name: &str) -> Result<InputMode> {
    match name {
        "flat" => Ok(InputMode::Flat),
        "optimal" => Ok(InputMode::Optimal),
        other => Err(Error::Config(format!("unknown mode `{other}` (flat, optimal)"))),
    }
}

/// Where the control sits: exactly one of ζ, W (s⁻¹) or pulse energy (J).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    Zeta(f64),
    W(f64),
    Energy(f64),
}

impl Drive {
    pub fn from_options(zeta: Option<f64>, w: Option<f64>, energy: Option<f64>) -> Result<Self> {
        match (zeta, w, energy) {
            (Some(z), None, None) => Ok(Drive::Zeta(z)),
            (None, Some(w), None) => Ok(Drive::W(w)),
            (None, None, Some(e)) => Ok(Drive::Energy(e)),
            _ => Err(Error::Config("give exactly one of zeta, w, energy".into())),
        }
    }
}

fn model(p: &Preset, drive: Drive) -> Result<MemoryModel> {
    let m = MemoryModel::new(p.phys, p.cav, ControlParams::new(0.0)?)?;
    match drive {
        Drive::Zeta(z) => m.with_zeta(z),
        Drive::W(w) => m.with_w(w),
        Drive::Energy(e) => m.with_w(EnergyMap::for_preset(p, CS_CALIBRATED_DIPOLE)?.energy_to_w(e)?),
    }
}

pub fn preset_summary(r: f64, loss: f64) -> Result<Record> {
    let p = cs_preset(r, loss)?;
    let rules = DesignRules::new(&p.phys, &p.cav, DEFAULT_A_MARGIN)?;
    Ok(vec![
        ("r", r),
        ("loss", loss),
        ("length", p.geometry.length),
        ("fsr_hz", p.geometry.delta_fsr / TAU),
        ("signal_finesse", p.signal_finesse()),
        ("linewidth_hz", linewidth(p.geometry.delta_fsr, p.signal_finesse()) / TAU),
        ("bandwidth_limit_hz", rules.bandwidth_limit / TAU),
        ("r_opt", rules.r_opt),
        ("chi_opt_half", rules.chi_opt_half),
        ("c_bb", rules.c_bb),
        ("eta_asymptotic", asymptotic_efficiency(&p)?),
    ])
}

pub fn evaluate(r: f64, loss: f64, drive: Drive, n_in_1: f64, g2_in: f64, mode: &str, grid_n: usize) -> Result<Record> {
    let p = cs_preset(r, loss)?;
    let m = model(&p, drive)?;
    let res = response::evaluate(&input_mode(mode)?, n_in_1, g2_in, &m.dc, grid_n)?;
    Ok(vec![
        ("zeta", m.dc.zeta),
        ("w", m.control.w),
        ("chi_abs", m.dc.chi.norm()),
        ("n_out_1", res.n_out_1),
        ("n_out_2", res.n_out_2),
        ("noise_floor", res.noise_floor),
        ("eta_store", res.eta_store),
        ("eta_ret", res.eta_ret),
        ("eta_tot", res.eta_tot),
        ("snr", res.snr),
        ("g2_out_1", res.g2_out_1),
        ("g2_out_2", res.g2_out_2),
        ("kappa_re", res.kappa_overlap.re),
        ("kappa_im", res.kappa_overlap.im),
    ])
}

/// Closed form against the kernel oracle at one point.
pub fn verify(r: f64, loss: f64, zeta: f64, n_in_1: f64, g2_in: f64, mode: &str, grid_n: usize) -> Result<Record> {
    let p = cs_preset(r, loss)?;
    let m = model(&p, Drive::Zeta(zeta))?;
    let mode = input_mode(mode)?;
    let cf = response::evaluate(&mode, n_in_1, g2_in, &m.dc, grid_n)?;
    let k = kernel_photon_numbers(&m.dc, &mode, n_in_1, g2_in, grid_n)?;
    Ok(vec![
        ("n_out_1", cf.n_out_1),
        ("oracle_n_out_1", k.n_out_1.extrapolated),
        ("n_out_2", cf.n_out_2),
        ("oracle_n_out_2", k.n_out_2.extrapolated),
        ("noise_floor", cf.noise_floor),
        ("oracle_noise_floor", k.noise_floor.extrapolated),
        ("g2_out_2", cf.g2_out_2),
        ("oracle_g2_out_2", k.g2_out_2.extrapolated),
    ])
}

/// Runs a TOML scan config and returns the CSV text the CLI would write.
pub fn scan_csv(config: &str, jobs: usize, verify: bool) -> Result<String> {
    let cfg = ScanConfig::from_toml(config)?;
    let mut opts = ScanOptions::from_config(&cfg, jobs.max(1));
    opts.verify |= verify;
    let mut buf = Vec::new();
    write_scan_csv(&mut buf, &run_scan(&cfg, &opts)?)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

pub fn limits_csv(config: &str) -> Result<String> {
    let cfg = ScanConfig::from_toml(config)?;
    let mut buf = Vec::new();
    write_limits_csv(&mut buf, &limits_table(&cfg)?)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_names() {
        assert!(matches!(input_mode("flat"), Ok(InputMode::Flat)));
        assert!(matches!(input_mode("optimal"), Ok(InputMode::Optimal)));
        assert_eq!(input_mode("Flat").unwrap_err().exit_code(), 1);
    }
}
