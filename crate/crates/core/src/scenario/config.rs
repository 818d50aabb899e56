//! TOML scan configuration.
//!
//! ```toml
//! preset = "cs"                 # optional; fills every physical default
//!
//! [physical]                    # frequencies in Hz, converted to rad/s
//! delta_s_hz = 5e9
//!
//! [cavity]
//! r = 0.9
//! loss = 0.01                   # roundtrip intensity loss
//!
//! [control]
//! energy = 1e-11                # J; or `w` (s⁻¹) or `zeta`
//!
//! [input]
//! n_in_1 = 0.5
//! g2_in = 0.0
//! mode = "flat"                 # or "optimal"
//!
//! [[axis]]
//! path = "control.energy"
//! logspace = { start = 1e-14, stop = 1e-10, num = 41 }
//!
//! [output]
//! csv = "scan.csv"
//! verify = false
//! grid_n = 1000
//! ```
//!
//! Unknown keys anywhere are rejected.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::coupling::ControlParams;
use crate::error::{Error, Result};
use crate::limits::fsr_and_geometry;
use crate::model::MemoryModel;
use crate::params::{finesse, hz, AtomicPhase, CavityParams, PhysicalParams};
use crate::response::InputMode;

use super::energy::{EnergyMap, CS_CALIBRATED_DIPOLE};
use super::preset;

pub const DEFAULT_GRID_N: usize = 1000;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub preset: Option<PresetName>,
    #[serde(default)]
    pub physical: PhysicalSection,
    #[serde(default)]
    pub cavity: CavitySection,
    #[serde(default)]
    pub control: ControlSection,
    pub energy_map: Option<EnergyMapSection>,
    #[serde(default)]
    pub input: InputSection,
    #[serde(default, rename = "axis")]
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresetName {
    Cs,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalSection {
    pub gamma_hz: Option<f64>,
    pub delta_hz: Option<f64>,
    pub delta_s_hz: Option<f64>,
    /// Defaults to Δ_s + 2δ.
    pub delta_a_hz: Option<f64>,
    pub d: Option<f64>,
    pub lambda: Option<f64>,
    pub ks_l: Option<f64>,
    pub ka_l: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySection {
    pub r: Option<f64>,
    pub loss: Option<f64>,
    /// Defaults to the length of the order-`order` cavity, L = 2πc(2m+1)/4δ.
    pub length: Option<f64>,
    pub order: Option<u32>,
    pub atomic_phase: Option<AtomicPhaseName>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomicPhaseName {
    Included,
    Neglected,
}

impl From<AtomicPhaseName> for AtomicPhase {
    fn from(a: AtomicPhaseName) -> Self {
        match a {
            AtomicPhaseName::Included => AtomicPhase::Included,
            AtomicPhaseName::Neglected => AtomicPhase::Neglected,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlSection {
    pub w: Option<f64>,
    pub energy: Option<f64>,
    pub zeta: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyMapSection {
    pub dipole_moment: Option<f64>,
    pub mode_area: Option<f64>,
    pub control_finesse: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSection {
    #[serde(default = "one")]
    pub n_in_1: f64,
    #[serde(default)]
    pub g2_in: f64,
    #[serde(default)]
    pub mode: ModeName,
}

impl Default for InputSection {
    fn default() -> Self {
        InputSection {
            n_in_1: 1.0,
            g2_in: 0.0,
            mode: ModeName::Flat,
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    #[default]
    Flat,
    Optimal,
}

impl ModeName {
    pub fn input_mode(self) -> InputMode {
        match self {
            ModeName::Flat => InputMode::Flat,
            ModeName::Optimal => InputMode::Optimal,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModeName::Flat => "flat",
            ModeName::Optimal => "optimal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub path: AxisPath,
    pub values: Option<Vec<f64>>,
    pub linspace: Option<Span>,
    pub logspace: Option<Span>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Span {
    pub start: f64,
    pub stop: f64,
    pub num: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum AxisPath {
    #[serde(rename = "control.energy")]
    Energy,
    #[serde(rename = "control.w")]
    W,
    #[serde(rename = "control.zeta")]
    Zeta,
    #[serde(rename = "cavity.r")]
    R,
    #[serde(rename = "cavity.loss")]
    Loss,
    #[serde(rename = "cavity.length")]
    Length,
    #[serde(rename = "physical.delta_s_hz")]
    DeltaS,
    #[serde(rename = "physical.delta_a_hz")]
    DeltaA,
    #[serde(rename = "physical.d")]
    D,
    #[serde(rename = "input.n_in_1")]
    NIn1,
    #[serde(rename = "input.g2_in")]
    G2In,
}

impl AxisPath {
    pub fn name(self) -> &'static str {
        match self {
            AxisPath::Energy => "control.energy",
            AxisPath::W => "control.w",
            AxisPath::Zeta => "control.zeta",
            AxisPath::R => "cavity.r",
            AxisPath::Loss => "cavity.loss",
            AxisPath::Length => "cavity.length",
            AxisPath::DeltaS => "physical.delta_s_hz",
            AxisPath::DeltaA => "physical.delta_a_hz",
            AxisPath::D => "physical.d",
            AxisPath::NIn1 => "input.n_in_1",
            AxisPath::G2In => "input.g2_in",
        }
    }

    /// Axes that set the control strength.
    pub fn is_drive(self) -> bool {
        matches!(self, AxisPath::Energy | AxisPath::W | AxisPath::Zeta)
    }
}

impl fmt::Display for AxisPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Axis {
    pub fn resolve_values(&self) -> Result<Vec<f64>> {
        let name = self.path.name();
        let given = [self.values.is_some(), self.linspace.is_some(), self.logspace.is_some()];
        if given.iter().filter(|&&b| b).count() != 1 {
            return Err(Error::Config(format!(
                "axis `{name}`: give exactly one of values, linspace, logspace"
            )));
        }
        let v = if let Some(v) = &self.values {
            v.clone()
        } else if let Some(s) = self.linspace {
            span(name, s, false)?
        } else {
            span(name, self.logspace.expect("checked above"), true)?
        };
        if v.is_empty() {
            return Err(Error::Config(format!("axis `{name}` has no values")));
        }
        if let Some(x) = v.iter().find(|x| !x.is_finite()) {
            return Err(Error::Config(format!("axis `{name}`: non-finite value {x}")));
        }
        Ok(v)
    }
}

fn span(name: &str, s: Span, log: bool) -> Result<Vec<f64>> {
    if s.num == 0 {
        return Err(Error::Config(format!("axis `{name}`: num must be >= 1")));
    }
    if !(s.start.is_finite() && s.stop.is_finite()) {
        return Err(Error::Config(format!("axis `{name}`: non-finite bounds")));
    }
    if log && !(s.start > 0.0 && s.stop > 0.0) {
        return Err(Error::Config(format!("axis `{name}`: logspace bounds must be > 0")));
    }
    let (a, b) = if log { (s.start.log10(), s.stop.log10()) } else { (s.start, s.stop) };
    let last = s.num - 1;
    Ok((0..s.num)
        .map(|k| match k {
            0 => s.start,
            k if k == last => s.stop,
            _ => {
                let x = a + (b - a) * k as f64 / last as f64;
                if log {
                    10f64.powf(x)
                } else {
                    x
                }
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub verify: bool,
    #[serde(default = "default_grid_n")]
    pub grid_n: usize,
    /// Fail the scan if η or the noise floor drop along the drive axis.
    #[serde(default)]
    pub monotonic_check: bool,
    /// Relative tolerance of the oracle photon numbers.
    #[serde(default = "default_photon_tol")]
    pub photon_tolerance: f64,
    #[serde(default = "default_g2_tol")]
    pub g2_tolerance: f64,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            csv: None,
            verify: false,
            grid_n: DEFAULT_GRID_N,
            monotonic_check: false,
            photon_tolerance: default_photon_tol(),
            g2_tolerance: default_g2_tol(),
        }
    }
}

fn default_grid_n() -> usize {
    DEFAULT_GRID_N
}

fn default_photon_tol() -> f64 {
    1e-6
}

fn default_g2_tol() -> f64 {
    1e-4
}

/// How the control strength of a point is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    /// Pulse energy (J), mapped through the energy map.
    Energy(f64),
    /// W = ∫|Ω|²dt (s⁻¹).
    W(f64),
    Zeta(f64),
}

/// Every input of one scan point, in config units.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSpec {
    pub gamma_hz: f64,
    pub delta_hz: f64,
    pub delta_s_hz: f64,
    pub delta_a_hz: Option<f64>,
    pub d: f64,
    pub lambda: f64,
    pub ks_l: f64,
    pub ka_l: f64,
    pub r: f64,
    pub loss: f64,
    pub length: Option<f64>,
    pub order: u32,
    pub atomic_phase: AtomicPhase,
    pub drive: Drive,
    pub energy_map: Option<EnergyMapSection>,
    pub n_in_1: f64,
    pub g2_in: f64,
    pub mode: ModeName,
}

/// A point turned into a model.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub model: MemoryModel,
    pub length: f64,
    pub delta_a_hz: f64,
    /// Set when the drive was given as an energy.
    pub energy: Option<f64>,
    pub energy_map: Option<EnergyMap>,
}

impl PointSpec {
    pub fn set(&mut self, path: AxisPath, v: f64) {
        match path {
            AxisPath::Energy => self.drive = Drive::Energy(v),
            AxisPath::W => self.drive = Drive::W(v),
            AxisPath::Zeta => self.drive = Drive::Zeta(v),
            AxisPath::R => self.r = v,
            AxisPath::Loss => self.loss = v,
            AxisPath::Length => self.length = Some(v),
            AxisPath::DeltaS => self.delta_s_hz = v,
            AxisPath::DeltaA => self.delta_a_hz = Some(v),
            AxisPath::D => self.d = v,
            AxisPath::NIn1 => self.n_in_1 = v,
            AxisPath::G2In => self.g2_in = v,
        }
    }

    pub fn physical(&self) -> Result<PhysicalParams> {
        let delta_s = hz(self.delta_s_hz);
        let delta = hz(self.delta_hz);
        let delta_a = match self.delta_a_hz {
            Some(v) => hz(v),
            None => PhysicalParams::default_delta_a(delta_s, delta),
        };
        PhysicalParams::new(hz(self.gamma_hz), delta, delta_s, delta_a, self.d, self.lambda, self.ks_l, self.ka_l)
    }

    pub fn cavity(&self) -> Result<CavityParams> {
        let length = match self.length {
            Some(l) => l,
            None => fsr_and_geometry(hz(self.delta_hz), self.order, self.lambda)?.length,
        };
        let mu = CavityParams::loss_amplitude_from_intensity(self.loss)?;
        Ok(CavityParams::new(self.r, length, mu)?.with_atomic_phase(self.atomic_phase))
    }

    pub fn energy_map(&self, cav: &CavityParams) -> Result<Option<EnergyMap>> {
        let Some(m) = &self.energy_map else {
            return Ok(None);
        };
        let dipole = m
            .dipole_moment
            .ok_or_else(|| Error::Config("energy_map.dipole_moment is required without a preset".into()))?;
        let area = m.mode_area.unwrap_or(self.lambda * cav.length);
        let fin = m.control_finesse.unwrap_or(finesse(cav.r * cav.extra_loss_s));
        EnergyMap::new(dipole, area, fin).map(Some)
    }

    pub fn build(&self) -> Result<Point> {
        let phys = self.physical()?;
        let cav = self.cavity()?;
        let map = self.energy_map(&cav)?;
        let base = MemoryModel::new(phys, cav, ControlParams::new(0.0)?)?;
        let (model, energy) = match self.drive {
            Drive::W(w) => (base.with_w(w)?, None),
            Drive::Zeta(z) => (base.with_zeta(z)?, None),
            Drive::Energy(e) => {
                let map = map.ok_or_else(|| Error::Config("an energy drive needs an [energy_map]".into()))?;
                (base.with_w(map.energy_to_w(e)?)?, Some(e))
            }
        };
        Ok(Point {
            model,
            length: cav.length,
            delta_a_hz: phys.delta_a / (2.0 * PI),
            energy,
            energy_map: map,
        })
    }
}

impl ScanConfig {
    pub fn from_toml(s: &str) -> Result<Self> {
        let cfg: ScanConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&s)
    }

    /// Structural checks; numerical validity is judged per point.
    pub fn validate(&self) -> Result<()> {
        let mut seen = Vec::new();
        for a in &self.axes {
            if seen.contains(&a.path) {
                return Err(Error::Config(format!("axis `{}` given twice", a.path)));
            }
            if a.path.is_drive() && seen.iter().any(|p: &AxisPath| p.is_drive()) {
                return Err(Error::Config("at most one of control.energy/w/zeta may be scanned".into()));
            }
            seen.push(a.path);
            a.resolve_values()?;
        }
        let c = &self.control;
        if [c.w, c.energy, c.zeta].iter().filter(|x| x.is_some()).count() > 1 {
            return Err(Error::Config("[control] takes only one of w, energy, zeta".into()));
        }
        if self.output.grid_n < 2 {
            return Err(Error::Config("output.grid_n must be >= 2".into()));
        }
        if self.output.verify && self.output.grid_n < 100 {
            return Err(Error::Config("verification needs output.grid_n >= 100".into()));
        }
        let uses_energy = c.energy.is_some() || seen.contains(&AxisPath::Energy);
        if uses_energy && self.energy_map.is_none() && self.preset.is_none() {
            return Err(Error::Config("an energy drive needs an [energy_map] or a preset".into()));
        }
        self.base_point()?;
        Ok(())
    }

    /// The point with every axis at its configured (non-scanned) value.
    pub fn base_point(&self) -> Result<PointSpec> {
        let p = &self.physical;
        let c = &self.cavity;
        let cs = self.preset == Some(PresetName::Cs);
        let req = |v: Option<f64>, name: &str, default: f64| -> Result<f64> {
            match (v, cs) {
                (Some(x), _) => Ok(x),
                (None, true) => Ok(default),
                (None, false) => Err(Error::Config(format!("`{name}` is required without a preset"))),
            }
        };
        let drive = match (self.control.w, self.control.energy, self.control.zeta) {
            (Some(w), _, _) => Drive::W(w),
            (_, Some(e), _) => Drive::Energy(e),
            (_, _, Some(z)) => Drive::Zeta(z),
            _ => Drive::W(0.0),
        };
        let energy_map = match (&self.energy_map, cs) {
            (Some(m), true) => Some(EnergyMapSection {
                dipole_moment: m.dipole_moment.or(Some(CS_CALIBRATED_DIPOLE)),
                ..m.clone()
            }),
            (None, true) => Some(EnergyMapSection {
                dipole_moment: Some(CS_CALIBRATED_DIPOLE),
                ..Default::default()
            }),
            (m, false) => m.clone(),
        };
        Ok(PointSpec {
            gamma_hz: req(p.gamma_hz, "physical.gamma_hz", preset::CS_GAMMA)?,
            delta_hz: req(p.delta_hz, "physical.delta_hz", preset::CS_DELTA)?,
            delta_s_hz: req(p.delta_s_hz, "physical.delta_s_hz", preset::CS_DELTA_S)?,
            delta_a_hz: p.delta_a_hz,
            d: req(p.d, "physical.d", preset::CS_OPTICAL_DEPTH)?,
            lambda: req(p.lambda, "physical.lambda", preset::CS_LAMBDA)?,
            ks_l: p.ks_l.unwrap_or(0.0),
            ka_l: p.ka_l.unwrap_or(PI),
            r: req(c.r, "cavity.r", 0.9)?,
            loss: c.loss.unwrap_or(0.0),
            length: c.length,
            order: c.order.unwrap_or(0),
            atomic_phase: match (c.atomic_phase, cs) {
                (Some(a), _) => a.into(),
                (None, true) => AtomicPhase::Neglected,
                (None, false) => AtomicPhase::Included,
            },
            drive,
            energy_map,
            n_in_1: self.input.n_in_1,
            g2_in: self.input.g2_in,
            mode: self.input.mode,
        })
    }

    /// Axis values, outermost first.
    pub fn axis_values(&self) -> Result<Vec<(AxisPath, Vec<f64>)>> {
        self.axes.iter().map(|a| Ok((a.path, a.resolve_values()?))).collect()
    }

    /// Cartesian product of the axes; the last axis varies fastest.
    pub fn points(&self) -> Result<Vec<(Vec<usize>, PointSpec)>> {
        let base = self.base_point()?;
        let axes = self.axis_values()?;
        let total: usize = axes.iter().map(|(_, v)| v.len()).product();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; axes.len()];
        for _ in 0..total {
            let mut spec = base.clone();
            for (k, (path, vals)) in axes.iter().enumerate() {
                spec.set(*path, vals[idx[k]]);
            }
            out.push((idx.clone(), spec));
            for k in (0..axes.len()).rev() {
                idx[k] += 1;
                if idx[k] < axes[k].1.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG3: &str = r#"
preset = "cs"
[cavity]
r = 0.9
[input]
n_in_1 = 0.5
mode = "optimal"
[[axis]]
path = "cavity.loss"
values = [0.0, 0.01, 0.02, 0.05]
[[axis]]
path = "control.energy"
logspace = { start = 1e-14, stop = 1e-10, num = 5 }
"#;

    #[test]
    fn parses_and_expands() {
        let cfg = ScanConfig::from_toml(FIG3).unwrap();
        let pts = cfg.points().unwrap();
        assert_eq!(pts.len(), 20);
        assert_eq!(pts[0].0, vec![0, 0]);
        assert_eq!(pts[1].0, vec![0, 1]);
        assert_eq!(pts[5].1.loss, 0.01);
        assert_eq!(pts[4].1.drive, Drive::Energy(1e-10));
        assert_eq!(pts[2].1.drive, Drive::Energy(1e-12));
        let p = pts[7].1.build().unwrap();
        assert!(p.model.control.w > 0.0);
        assert_eq!(p.model.cav.atomic_phase, AtomicPhase::Neglected);
    }

    #[test]
    fn preset_base_matches_cs_preset() {
        let cfg = ScanConfig::from_toml("preset = \"cs\"\n[cavity]\nr = 0.95\nloss = 0.02").unwrap();
        let p = cfg.base_point().unwrap().build().unwrap();
        let q = preset::cs_preset(0.95, 0.02).unwrap();
        assert_eq!(p.model.phys, q.phys);
        assert_eq!(p.model.cav, q.cav);
    }

    #[test]
    fn rejects_unknown_keys() {
        for bad in [
            "preset = \"cs\"\nbogus = 1",
            "preset = \"cs\"\n[cavity]\nrr = 0.9",
            "preset = \"cs\"\n[[axis]]\npath = \"cavity.r\"\nvalues = [0.9]\nstep = 2",
            "preset = \"cs\"\n[[axis]]\npath = \"cavity.q\"\nvalues = [0.9]",
            "preset = \"rb\"",
        ] {
            assert!(matches!(ScanConfig::from_toml(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn rejects_bad_axes() {
        for bad in [
            "preset = \"cs\"\n[[axis]]\npath = \"cavity.r\"",
            "preset = \"cs\"\n[[axis]]\npath = \"cavity.r\"\nvalues = []",
            "preset = \"cs\"\n[[axis]]\npath = \"cavity.r\"\nvalues = [0.9, nan]",
            "preset = \"cs\"\n[[axis]]\npath = \"cavity.r\"\nvalues = [0.9]\nlinspace = {start = 0.1, stop = 0.2, num = 2}",
            "preset = \"cs\"\n[[axis]]\npath = \"control.w\"\nlogspace = {start = 0.0, stop = 1.0, num = 3}",
            "preset = \"cs\"\n[[axis]]\npath = \"control.w\"\nvalues = [1]\n[[axis]]\npath = \"control.energy\"\nvalues = [1]",
            "preset = \"cs\"\n[[axis]]\npath = \"cavity.r\"\nvalues = [1]\n[[axis]]\npath = \"cavity.r\"\nvalues = [1]",
            "preset = \"cs\"\n[control]\nw = 1.0\nenergy = 1e-12",
        ] {
            assert!(matches!(ScanConfig::from_toml(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn explicit_params_required_without_preset() {
        assert!(ScanConfig::from_toml("[cavity]\nr = 0.9").is_err());
        let cfg = ScanConfig::from_toml(
            "[physical]\ngamma_hz = 25e6\ndelta_hz = 9.2e9\ndelta_s_hz = 5e9\nd = 380\nlambda = 852e-9\n\
             [cavity]\nr = 0.9\natomic_phase = \"neglected\"\n[control]\nzeta = 1.0",
        )
        .unwrap();
        let p = cfg.base_point().unwrap().build().unwrap();
        assert!((p.model.dc.zeta - 1.0).abs() < 1e-12);
        let energy_without_map = "[physical]\ngamma_hz = 25e6\ndelta_hz = 9.2e9\ndelta_s_hz = 5e9\nd = 380\n\
                                  lambda = 852e-9\n[cavity]\nr = 0.9\n[control]\nenergy = 1e-12";
        assert!(ScanConfig::from_toml(energy_without_map).is_err());
    }

    #[test]
    fn spans() {
        let lin = span("x", Span { start: 0.0, stop: 1.0, num: 5 }, false).unwrap();
        assert_eq!(lin, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let log = span("x", Span { start: 1e-14, stop: 1e-10, num: 5 }, true).unwrap();
        assert_eq!(log[0], 1e-14);
        assert_eq!(log[4], 1e-10);
        assert!((log[2] / 1e-12 - 1.0).abs() < 1e-14);
        assert_eq!(span("x", Span { start: 3.0, stop: 4.0, num: 1 }, false).unwrap(), vec![3.0]);
    }
}
