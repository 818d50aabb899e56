//! Control pulse energy to W = ∫|Ω|²dt.
//!
//! W = (2ℱ_Ω/π)(d_dip/ħ)²·2𝓔/(cε₀𝒜): the free-space peak intensity 2𝓔/(cε₀𝒜)
//! per unit time, converted to |Ω|² and enhanced by the control cavity.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coupling::ControlParams;
use crate::error::{Error, Result};
use crate::model::MemoryModel;
use crate::limits;
use crate::params::C_LIGHT;
use crate::response::{self, InputMode};

use super::preset::Preset;

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Dipole moment (C·m) at which the lossless r = 0.9 Cs preset reaches 90% of
/// its asymptotic optimal-mode efficiency at 𝓔 = 10 pJ. Reproduced by
/// [`calibrate_dipole`] in the tests.
pub const CS_CALIBRATED_DIPOLE: f64 = 1.262_437_466_275_257e-30;

/// Energy at which the calibration is pinned (J).
pub const CALIBRATION_ENERGY: f64 = 10e-12;
pub const CALIBRATION_FRACTION: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyMap {
    /// Transition dipole moment (C·m).
    pub dipole_moment: f64,
    /// Cavity mode area 𝒜 (m²).
    pub mode_area: f64,
    /// Control-cavity finesse ℱ_Ω.
    pub control_finesse: f64,
}

impl EnergyMap {
    pub fn new(dipole_moment: f64, mode_area: f64, control_finesse: f64) -> Result<Self> {
        let m = EnergyMap {
            dipole_moment,
            mode_area,
            control_finesse,
        };
        m.validate()?;
        Ok(m)
    }

    /// Mode area λL and the control seeing the signal's empty-cavity finesse.
    pub fn for_preset(p: &Preset, dipole_moment: f64) -> Result<Self> {
        Self::new(dipole_moment, p.geometry.mode_area, p.signal_finesse())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("dipole_moment", self.dipole_moment),
            ("mode_area", self.mode_area),
            ("control_finesse", self.control_finesse),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("{v} must be finite and > 0")));
            }
        }
        Ok(())
    }

    /// dW/d𝓔 (s⁻¹ J⁻¹).
    pub fn slope(&self) -> f64 {
        (2.0 * self.control_finesse / PI) * (self.dipole_moment / HBAR).powi(2) * 2.0
            / (C_LIGHT * EPSILON_0 * self.mode_area)
    }

    pub fn energy_to_w(&self, energy: f64) -> Result<f64> {
        if !(energy.is_finite() && energy >= 0.0) {
            return Err(Error::invalid("energy", format!("{energy} must be finite and >= 0")));
        }
        Ok(self.slope() * energy)
    }

    /// Inverse of [`energy_to_w`](Self::energy_to_w).
    pub fn w_to_energy(&self, w: f64) -> f64 {
        w / self.slope()
    }
}

/// η_tot(W) for a preset and input mode.
pub fn efficiency_at(p: &Preset, mode: &InputMode, w: f64) -> Result<f64> {
    let m = MemoryModel::new(p.phys, p.cav, ControlParams::new(w)?)?;
    let kappa = response::retrieval_overlap_kappa(mode, m.dc.f, m.dc.zeta);
    Ok(response::efficiency(kappa, &m.dc))
}

/// Strong-coupling efficiency of the optimal mode, independent of W.
pub fn asymptotic_efficiency(p: &Preset) -> Result<f64> {
    let m = MemoryModel::new(p.phys, p.cav, ControlParams::new(1.0)?)?;
    Ok(limits::strong_coupling_efficiency(Complex64::new(1.0, 0.0), &m.dc))
}

/// W at which the optimal-mode η_tot first reaches `fraction` of its asymptote,
/// by bisection in log W.
pub fn saturation_w(p: &Preset, fraction: f64) -> Result<f64> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::invalid("fraction", format!("{fraction} not in (0, 1)")));
    }
    let target = fraction * asymptotic_efficiency(p)?;
    let g = |lw: f64| efficiency_at(p, &InputMode::Optimal, lw.exp()).map(|e| e - target);
    let (mut lo, mut hi) = (0.0_f64, 10.0_f64);
    while g(hi)? < 0.0 {
        lo = hi;
        hi += 10.0;
        if hi > 200.0 {
            return Err(Error::ModelInconsistency(format!(
                "efficiency never reaches {fraction} of its asymptote"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Dipole moment for which `energy` lands on the saturation point
/// [`saturation_w`]`(p, fraction)`, given the mode area and control finesse.
pub fn calibrate_dipole(p: &Preset, mode_area: f64, control_finesse: f64, energy: f64, fraction: f64) -> Result<f64> {
    let w = saturation_w(p, fraction)?;
    let unit = EnergyMap::new(1.0, mode_area, control_finesse)?;
    Ok((w / unit.energy_to_w(energy)?).sqrt())
}
