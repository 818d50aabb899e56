//! The caesium-vapour operating point.

use std::f64::consts::PI;

use crate::error::Result;
use crate::limits::{fsr_and_geometry, Geometry};
use crate::params::{finesse, hz, AtomicPhase, CavityParams, PhysicalParams};

pub const CS_GAMMA: f64 = 25e6;
pub const CS_DELTA: f64 = 9.2e9;
pub const CS_DELTA_S: f64 = 5e9;
pub const CS_OPTICAL_DEPTH: f64 = 380.0;
pub const CS_LAMBDA: f64 = 852e-9;

/// A named parameter set before the control is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub phys: PhysicalParams,
    pub cav: CavityParams,
    pub geometry: Geometry,
    /// Roundtrip intensity loss the cavity was built with.
    pub intensity_loss: f64,
}

impl Preset {
    /// Empty-cavity signal finesse, ℱ(r·μ_loss).
    pub fn signal_finesse(&self) -> f64 {
        finesse(self.cav.r * self.cav.extra_loss_s)
    }
}

/// Cs D2 line, zero-order cavity: signal resonant, anti-Stokes anti-resonant.
///
/// Frequencies are stored as angular. The dispersive roundtrip phase is
/// dropped (the cavity is assumed re-tuned onto the loaded resonance).
pub fn cs_preset(r: f64, intensity_loss: f64) -> Result<Preset> {
    let delta = hz(CS_DELTA);
    let delta_s = hz(CS_DELTA_S);
    let geometry = fsr_and_geometry(delta, 0, CS_LAMBDA)?;
    let phys = PhysicalParams::new(
        hz(CS_GAMMA),
        delta,
        delta_s,
        PhysicalParams::default_delta_a(delta_s, delta),
        CS_OPTICAL_DEPTH,
        CS_LAMBDA,
        0.0,
        PI,
    )?;
    let mu = CavityParams::loss_amplitude_from_intensity(intensity_loss)?;
    let cav = CavityParams::new(r, geometry.length, mu)?.with_atomic_phase(AtomicPhase::Neglected);
    Ok(Preset {
        phys,
        cav,
        geometry,
        intensity_loss,
    })
}
