//! Atomic and cavity inputs, plus the first tier of derived complex rates.
//!
//! All frequencies are angular (rad/s). `γ` is the HWHM linewidth.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const C_LIGHT: f64 = 299_792_458.0;

/// Convert a frequency in Hz to angular frequency.
pub fn hz(f: f64) -> f64 {
    TAU * f
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Homogeneous HWHM linewidth γ.
    pub gamma: f64,
    /// Ground-state splitting δ.
    pub delta: f64,
    /// Signal detuning Δ_s.
    pub delta_s: f64,
    /// Anti-Stokes detuning Δ_a.
    pub delta_a: f64,
    /// Single-pass resonant optical depth.
    pub d: f64,
    /// Signal wavelength (m).
    pub lambda_s: f64,
    /// k_s L modulo 2π.
    pub ks_l: f64,
    /// k_a L modulo 2π.
    pub ka_l: f64,
}

impl PhysicalParams {
    /// Build and validate. The carrier phases are reduced modulo 2π.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        gamma: f64,
        delta: f64,
        delta_s: f64,
        delta_a: f64,
        d: f64,
        lambda_s: f64,
        ks_l: f64,
        ka_l: f64,
    ) -> Result<Self> {
        let p = PhysicalParams {
            gamma,
            delta,
            delta_s,
            delta_a,
            d,
            lambda_s,
            ks_l: wrap_phase(ks_l),
            ka_l: wrap_phase(ka_l),
        };
        p.validate()?;
        Ok(p)
    }

    /// Default anti-Stokes detuning: Stokes and anti-Stokes sit 2δ apart.
    pub fn default_delta_a(delta_s: f64, delta: f64) -> f64 {
        delta_s + 2.0 * delta
    }

    pub fn validate(&self) -> Result<()> {
        positive("gamma", self.gamma)?;
        positive("delta", self.delta)?;
        finite("delta_s", self.delta_s)?;
        finite("delta_a", self.delta_a)?;
        finite("d", self.d)?;
        if self.d < 0.0 {
            return Err(Error::invalid("d", "optical depth must be >= 0"));
        }
        positive("lambda_s", self.lambda_s)?;
        for (name, v) in [("ks_l", self.ks_l), ("ka_l", self.ka_l)] {
            if !(0.0..TAU).contains(&v) {
                return Err(Error::invalid(name, format!("{v} not in [0, 2pi)")));
            }
        }
        Ok(())
    }
}

/// Whether the atomic dispersion Im{κ}τ enters the roundtrip phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AtomicPhase {
    /// φ = kL − Im{κ}τ.
    #[default]
    Included,
    /// φ = kL: the cavity length is taken to be re-tuned so that the loaded
    /// resonance sits at kL.
    Neglected,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// Coupler amplitude reflectivity.
    pub r: f64,
    /// Roundtrip optical path (m).
    pub length: f64,
    /// Roundtrip time L/c (s).
    pub tau: f64,
    /// Non-atomic roundtrip amplitude transmission for the signal.
    pub extra_loss_s: f64,
    /// Non-atomic roundtrip amplitude transmission for the anti-Stokes field.
    pub extra_loss_a: f64,
    pub atomic_phase: AtomicPhase,
}

impl CavityParams {
    pub fn new(r: f64, length: f64, extra_loss_amplitude: f64) -> Result<Self> {
        let c = CavityParams {
            r,
            length,
            tau: length / C_LIGHT,
            extra_loss_s: extra_loss_amplitude,
            extra_loss_a: extra_loss_amplitude,
            atomic_phase: AtomicPhase::Included,
        };
        c.validate()?;
        Ok(c)
    }

    /// Amplitude transmission for a roundtrip intensity loss fraction.
    pub fn loss_amplitude_from_intensity(loss: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&loss) {
            return Err(Error::invalid("loss", format!("{loss} not in [0, 1)")));
        }
        Ok((1.0 - loss).sqrt())
    }

    pub fn with_field_losses(mut self, loss_s: f64, loss_a: f64) -> Result<Self> {
        self.extra_loss_s = loss_s;
        self.extra_loss_a = loss_a;
        self.validate()?;
        Ok(self)
    }

    pub fn with_atomic_phase(mut self, ap: AtomicPhase) -> Self {
        self.atomic_phase = ap;
        self
    }

    /// Coupler amplitude transmission t_r = √(1−r²).
    pub fn t_r(&self) -> f64 {
        (1.0 - self.r * self.r).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(Error::invalid("r", format!("{} not in (0, 1)", self.r)));
        }
        positive("length", self.length)?;
        positive("tau", self.tau)?;
        if ((self.tau - self.length / C_LIGHT) / self.tau).abs() > 1e-12 {
            return Err(Error::invalid("tau", "must equal length / c"));
        }
        for (name, v) in [
            ("extra_loss_s", self.extra_loss_s),
            ("extra_loss_a", self.extra_loss_a),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::invalid(name, format!("{v} not in (0, 1]")));
            }
        }
        Ok(())
    }
}

/// Γ = γ − iΔ.
pub fn complex_detuning(gamma: f64, delta_x: f64) -> Result<Complex64> {
    positive("gamma", gamma)?;
    Ok(Complex64::new(gamma, -delta_x))
}

/// Field absorption/dispersion rates κ_s = dγ/(τΓ_s), κ_a = dγ/(τΓ_a⁺).
pub fn absorption_rates(p: &PhysicalParams, c: &CavityParams) -> Result<(Complex64, Complex64)> {
    p.validate()?;
    c.validate()?;
    let gs = complex_detuning(p.gamma, p.delta_s)?;
    let gap = complex_detuning(p.gamma, p.delta_a + p.delta)?;
    let k = p.d * p.gamma / c.tau;
    Ok((k / gs, k / gap))
}

/// γ = e^(−ikL)(1 − μe^(iφ))/(rτ).
pub fn cavity_decay_rate(mu: f64, phi: f64, r: f64, tau: f64, kl: f64) -> Complex64 {
    Complex64::from_polar(1.0, -kl) * (1.0 - Complex64::from_polar(mu, phi)) / (r * tau)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexRates {
    /// Γ_s = γ − iΔ_s.
    pub det_s: Complex64,
    /// Γ_a = γ − iΔ_a.
    pub det_a: Complex64,
    /// Γ_a⁺ = γ − i(Δ_a + δ).
    pub det_a_plus: Complex64,
    pub kappa_s: Complex64,
    pub kappa_a: Complex64,
    pub phi_s: f64,
    pub phi_a: f64,
    pub mu_s: f64,
    pub mu_a: f64,
    pub gamma_cav_s: Complex64,
    pub gamma_cav_a: Complex64,
}

impl ComplexRates {
    pub fn new(p: &PhysicalParams, c: &CavityParams) -> Result<Self> {
        let (kappa_s, kappa_a) = absorption_rates(p, c)?;
        let disp = |k: Complex64| match c.atomic_phase {
            AtomicPhase::Included => k.im * c.tau,
            AtomicPhase::Neglected => 0.0,
        };
        let phi_s = p.ks_l - disp(kappa_s);
        let phi_a = p.ka_l - disp(kappa_a);
        let mu_s = c.r * (-kappa_s.re * c.tau).exp() * c.extra_loss_s;
        let mu_a = c.r * (-kappa_a.re * c.tau).exp() * c.extra_loss_a;
        Ok(ComplexRates {
            det_s: complex_detuning(p.gamma, p.delta_s)?,
            det_a: complex_detuning(p.gamma, p.delta_a)?,
            det_a_plus: complex_detuning(p.gamma, p.delta_a + p.delta)?,
            kappa_s,
            kappa_a,
            phi_s,
            phi_a,
            mu_s,
            mu_a,
            gamma_cav_s: cavity_decay_rate(mu_s, phi_s, c.r, c.tau, p.ks_l),
            gamma_cav_a: cavity_decay_rate(mu_a, phi_a, c.r, c.tau, p.ka_l),
        })
    }
}

/// ℱ = π√μ/(1−μ) for roundtrip amplitude transmission μ.
pub fn finesse(mu: f64) -> f64 {
    PI * mu.sqrt() / (1.0 - mu)
}

fn wrap_phase(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{v} must be finite and > 0")))
    }
}

fn finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{v} is not finite")))
    }
}
