//! Second-tier quantities: χ, 𝒞, C_s/C_a, x, the spin-wave coefficient f
//! and the coupling strength ζ.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{CavityParams, ComplexRates, PhysicalParams};

const DEGENERATE: f64 = 1e-15;
const ZETA_CONSISTENCY: f64 = 1e-9;

/// Temporal envelope family of the control, Ω(t) ∝ shape(t / width).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseShape {
    /// Ω ∝ exp(−t²/2T²).
    Gaussian { width: f64 },
    /// Ω ∝ sech(t/T).
    Sech { width: f64 },
}

impl PulseShape {
    pub fn width(&self) -> f64 {
        match *self {
            PulseShape::Gaussian { width } | PulseShape::Sech { width } => width,
        }
    }

    /// Unnormalised amplitude at time t (peak 1 at t=0).
    pub fn shape(&self, t: f64) -> f64 {
        match *self {
            PulseShape::Gaussian { width } => (-0.5 * (t / width).powi(2)).exp(),
            PulseShape::Sech { width } => 1.0 / (t / width).cosh(),
        }
    }

    /// ∫ shape² dt.
    pub fn energy(&self) -> f64 {
        match *self {
            PulseShape::Gaussian { width } => width * std::f64::consts::PI.sqrt(),
            PulseShape::Sech { width } => 2.0 * width,
        }
    }

    /// Half-span outside which shape² is below ~1e-28.
    pub fn half_span(&self) -> f64 {
        match *self {
            PulseShape::Gaussian { width } => 8.0 * width,
            PulseShape::Sech { width } => 33.0 * width,
        }
    }

    /// Real Rabi envelope Ω(t) normalised so that ∫|Ω|²dt = w.
    pub fn rabi(&self, w: f64, t: f64) -> f64 {
        (w / self.energy()).sqrt() * self.shape(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlParams {
    /// W = ∫|Ω|²dt.
    pub w: f64,
    /// Only the time-domain oracle looks at the shape.
    pub pulse: Option<PulseShape>,
}

impl ControlParams {
    pub fn new(w: f64) -> Result<Self> {
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::invalid("W", format!("{w} must be finite and >= 0")));
        }
        Ok(ControlParams { w, pulse: None })
    }

    pub fn with_pulse(mut self, pulse: PulseShape) -> Self {
        self.pulse = Some(pulse);
        self
    }
}

/// x = (1 − μ_s e^(iφ_s))/(1 − μ_a e^(−iφ_a)).
pub fn noise_suppression_factor(mu_s: f64, phi_s: f64, mu_a: f64, phi_a: f64) -> Result<Complex64> {
    let num = 1.0 - Complex64::from_polar(mu_s, phi_s);
    let den = nondegenerate("1 - mu_a e^(-i phi_a)", 1.0 - Complex64::from_polar(mu_a, -phi_a))?;
    Ok(num / den)
}

/// 𝒞 = d/(1 − μ_s e^(iφ_s)).
pub fn cooperativity(d: f64, mu_s: f64, phi_s: f64) -> Result<Complex64> {
    let den = nondegenerate("1 - mu_s e^(i phi_s)", 1.0 - Complex64::from_polar(mu_s, phi_s))?;
    Ok(d / den)
}

/// C_s,a = √(𝒞γW)/Γ_s,a on the principal branch.
pub fn coupling_parameters(
    coop: Complex64,
    det_s: Complex64,
    det_a: Complex64,
    gamma: f64,
    w: f64,
) -> Result<(Complex64, Complex64)> {
    if coop.re < 0.0 || (coop.re == 0.0 && coop.im != 0.0) {
        return Err(Error::ModelInconsistency(format!(
            "cooperativity {coop} has non-positive real part; square-root branch is ambiguous"
        )));
    }
    if !(w.is_finite() && w >= 0.0) {
        return Err(Error::invalid("W", format!("{w} must be finite and >= 0")));
    }
    let root = (coop * gamma * w).sqrt();
    Ok((root / det_s, root / det_a))
}

/// f from the adiabatic spin-wave equation, and ζ from the explicit
/// C_s/C_a form. The two must satisfy ζ = −2 Re f.
pub fn spinwave_coefficient(
    p: &PhysicalParams,
    c: &CavityParams,
    rates: &ComplexRates,
    c_s: Complex64,
    c_a: Complex64,
    x: Complex64,
    w: f64,
) -> Result<(Complex64, f64)> {
    let dg_tau = p.d * p.gamma / c.tau;
    let inv_s = rates.det_s.inv();
    let inv_a_conj = rates.det_a.conj().inv();

    let cav_s = dg_tau / (rates.det_s * rates.det_s * rates.gamma_cav_s);
    let cav_a = dg_tau / (rates.det_a.norm_sqr() * rates.gamma_cav_a.conj());
    let f = w * (cav_s + cav_a - inv_s - inv_a_conj);

    let (zeta, scale) = zeta_explicit(p, c, rates, c_s, c_a, x, w);
    let diff = (zeta + 2.0 * f.re).abs();
    if diff > ZETA_CONSISTENCY * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::ModelInconsistency(format!(
            "zeta = {zeta:e} but -2 Re f = {:e}",
            -2.0 * f.re
        )));
    }
    Ok((f, zeta))
}

/// ζ = −2r Re{C_s² e^(ik_sL) + C_a² x e^(−i(k_aL − 2 arg Γ_a))} + 2W Re{1/Γ_s + 1/Γ_a*}.
/// Also returns the sum of term magnitudes, the natural scale for rounding.
pub fn zeta_explicit(
    p: &PhysicalParams,
    c: &CavityParams,
    rates: &ComplexRates,
    c_s: Complex64,
    c_a: Complex64,
    x: Complex64,
    w: f64,
) -> (f64, f64) {
    let inv_s = rates.det_s.inv();
    let inv_a_conj = rates.det_a.conj().inv();
    let rot_s = Complex64::from_polar(1.0, p.ks_l);
    let rot_a = Complex64::from_polar(1.0, -(p.ka_l - 2.0 * rates.det_a.arg()));
    let t_s = c_s * c_s * rot_s;
    let t_a = c_a * c_a * x * rot_a;
    let zeta = -2.0 * c.r * (t_s + t_a).re + 2.0 * w * (inv_s + inv_a_conj).re;
    let scale = 2.0 * c.r * (t_s.norm() + t_a.norm()) + 2.0 * w * (inv_s.norm() + inv_a_conj.norm());
    (zeta, scale)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCoupling {
    /// χ = t_r²/(1 − μ_s e^(iφ_s)).
    pub chi: Complex64,
    /// 𝒞 = d/(1 − μ_s e^(iφ_s)).
    pub coop: Complex64,
    pub c_s: Complex64,
    pub c_a: Complex64,
    pub x: Complex64,
    pub f: Complex64,
    pub zeta: f64,
    /// Drive coefficients of ∂_ε b = f b + g_s σ_in + g_a α_in†.
    pub g_coef_s: Complex64,
    pub g_coef_a: Complex64,
    /// σ = c_s b + p_s σ_in, α = c_a b† + p_a α_in.
    pub p_s: Complex64,
    pub p_a: Complex64,
    pub c_coef_s: Complex64,
    pub c_coef_a: Complex64,
    /// Direct transmission χe^(iφ_s) − r.
    pub t_eff: Complex64,
    /// −r e^(i(φ_s + k_sL)) χ, prefactor of the FWM kernels.
    pub kernel_prefactor: Complex64,
    /// r e^(i(φ_s + k_sL)) χ, prefactor of the signal kernels M₁, M₂.
    pub signal_prefactor: Complex64,
}

impl DerivedCoupling {
    pub fn new(p: &PhysicalParams, c: &CavityParams, rates: &ComplexRates, w: f64) -> Result<Self> {
        let coop = cooperativity(p.d, rates.mu_s, rates.phi_s)?;
        let x = noise_suppression_factor(rates.mu_s, rates.phi_s, rates.mu_a, rates.phi_a)?;
        let (c_s, c_a) = coupling_parameters(coop, rates.det_s, rates.det_a, p.gamma, w)?;
        let (f, zeta) = spinwave_coefficient(p, c, rates, c_s, c_a, x, w)?;
        Ok(Self::assemble(p, c, rates, w, coop, x, c_s, c_a, f, zeta))
    }

    /// The δ → ∞ limit: the anti-Stokes field decouples entirely, so C_a = 0
    /// and the 1/Γ_a terms drop out of f and ζ.
    pub fn without_anti_stokes(p: &PhysicalParams, c: &CavityParams, rates: &ComplexRates, w: f64) -> Result<Self> {
        let coop = cooperativity(p.d, rates.mu_s, rates.phi_s)?;
        let x = noise_suppression_factor(rates.mu_s, rates.phi_s, rates.mu_a, rates.phi_a)?;
        let (c_s, _) = coupling_parameters(coop, rates.det_s, rates.det_a, p.gamma, w)?;
        let dg_tau = p.d * p.gamma / c.tau;
        let f = w * (dg_tau / (rates.det_s * rates.det_s * rates.gamma_cav_s) - rates.det_s.inv());
        let zeta = -2.0 * c.r * (c_s * c_s * Complex64::from_polar(1.0, p.ks_l)).re + 2.0 * w * rates.det_s.inv().re;
        let scale = 2.0 * c.r * c_s.norm_sqr() + 2.0 * w * rates.det_s.inv().norm();
        if (zeta + 2.0 * f.re).abs() > ZETA_CONSISTENCY * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::ModelInconsistency(format!("zeta = {zeta:e} but -2 Re f = {:e}", -2.0 * f.re)));
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut dc = Self::assemble(p, c, rates, w, coop, x, c_s, zero, f, zeta);
        dc.g_coef_a = zero;
        dc.c_coef_a = zero;
        Ok(dc)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        p: &PhysicalParams,
        c: &CavityParams,
        rates: &ComplexRates,
        w: f64,
        coop: Complex64,
        x: Complex64,
        c_s: Complex64,
        c_a: Complex64,
        f: Complex64,
        zeta: f64,
    ) -> Self {

        let t_r = c.t_r();
        let chi = t_r * t_r / (1.0 - Complex64::from_polar(rates.mu_s, rates.phi_s));
        let i = Complex64::i();
        let sq = (p.d * p.gamma * w).sqrt();
        let e_s = Complex64::from_polar(1.0, -p.ks_l);
        let e_a = Complex64::from_polar(1.0, -p.ka_l);
        let gs = rates.gamma_cav_s;
        let ga = rates.gamma_cav_a;
        let rs_tau = c.r * c.tau.sqrt();
        DerivedCoupling {
            chi,
            coop,
            c_s,
            c_a,
            x,
            f,
            zeta,
            g_coef_s: -i * t_r * e_s * sq / (rates.det_s * gs * c.tau * c.r),
            g_coef_a: i * t_r * e_a.conj() * sq / (rates.det_a * ga.conj() * c.tau * c.r),
            p_s: t_r * e_s / (gs * rs_tau),
            p_a: t_r * e_a / (ga * rs_tau),
            c_coef_s: i * (sq / c.tau.sqrt()) / (rates.det_s * gs),
            c_coef_a: i * (sq / c.tau.sqrt()) / (rates.det_a * ga),
            t_eff: chi * Complex64::from_polar(1.0, rates.phi_s) - c.r,
            kernel_prefactor: -c.r * Complex64::from_polar(1.0, rates.phi_s + p.ks_l) * chi,
            signal_prefactor: c.r * Complex64::from_polar(1.0, rates.phi_s + p.ks_l) * chi,
        }
    }

    /// x from the decay rates, x = e^(ik_sL)γ_s / (e^(−ik_aL)γ_a*).
    pub fn x_from_decay_rates(p: &PhysicalParams, rates: &ComplexRates) -> Complex64 {
        Complex64::from_polar(1.0, p.ks_l) * rates.gamma_cav_s
            / (Complex64::from_polar(1.0, -p.ka_l) * rates.gamma_cav_a.conj())
    }
}

fn nondegenerate(what: &'static str, z: Complex64) -> Result<Complex64> {
    if z.norm() < DEGENERATE {
        Err(Error::DegenerateCavity {
            what,
            value: z.norm(),
        })
    } else {
        Ok(z)
    }
}
