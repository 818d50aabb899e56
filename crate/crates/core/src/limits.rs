//! Asymptotic expansions, the no-FWM literature limit, and cavity design rules.
//!
//! Finesse is ℱ = π√μ/(1−μ) throughout, with μ the roundtrip amplitude
//! transmission of the empty cavity.

use std::f64::consts::{PI, SQRT_2, TAU};

use num_complex::Complex64;

use crate::coupling::DerivedCoupling;
use crate::error::{Error, Result};
use crate::params::{absorption_rates, finesse, AtomicPhase, CavityParams, PhysicalParams, C_LIGHT};
use crate::response::aux;

pub const DEFAULT_A_MARGIN: f64 = 0.3;

/// First-order-in-ζ approximations to the retrieval outputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakCoupling {
    pub n_out_2: f64,
    pub eta_tot: f64,
    pub snr: f64,
    /// None when N_in,1 = 0 (SNR = 0, the expression does not apply).
    pub g2_out_2: Option<f64>,
}

pub fn weak_coupling(n_in_1: f64, kappa: Complex64, dc: &DerivedCoupling) -> WeakCoupling {
    let z = dc.zeta;
    let pre = (dc.signal_prefactor * dc.c_s).norm_sqr();
    let cs2 = dc.c_s.norm_sqr();
    let fwm = (dc.c_a * dc.x).norm_sqr();
    let n_out_2 = pre * (n_in_1 * (1.0 - z) * cs2 * kappa.norm_sqr() + (1.5 - 7.0 * z / 6.0) * fwm);
    let eta_tot = (1.0 - z) * (dc.signal_prefactor * dc.c_s * dc.c_s * kappa).norm_sqr();
    // |Γ_a/Γ_s|² = |C_s/C_a|²
    let snr = if fwm == 0.0 {
        f64::INFINITY
    } else {
        (2.0 / 3.0 - 4.0 * z / 27.0) * n_in_1 * kappa.norm_sqr() * cs2 / fwm
    };
    let g2_out_2 = (snr > 0.0).then(|| (34.0 / 9.0 - 14.0 * z / 81.0) / snr);
    WeakCoupling {
        n_out_2,
        eta_tot,
        snr,
        g2_out_2,
    }
}

/// Low-noise retrieval g²: 2[1 + h′/(E²g)]/SNR, valid for |x|² ≪ N_in,1.
pub fn low_noise_g2(snr: f64, zeta: f64) -> f64 {
    let e = aux::e(zeta);
    2.0 * (1.0 + aux::h_prime(zeta) / (e * e * aux::g(zeta))) / snr
}

/// η_tot → |rχC_s²κ/ζ|² for ζ ≫ 1.
pub fn strong_coupling_efficiency(kappa: Complex64, dc: &DerivedCoupling) -> f64 {
    (dc.signal_prefactor * dc.c_s * dc.c_s * kappa / dc.zeta).norm_sqr()
}

/// Absorption-free cooperativity ℂ = rd/(1−r).
pub fn absorption_free_cooperativity(r: f64, d: f64) -> f64 {
    r * d / (1.0 - r)
}

/// η = |κ|²((1+r)/2)²[ℂ/(ℂ+1)]².
pub fn gorshkov_efficiency(r: f64, d: f64, kappa: Complex64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) || !(d >= 0.0 && d.is_finite()) {
        return Err(Error::Precondition(format!("need 0 < r < 1 and d >= 0, got r={r}, d={d}")));
    }
    let cc = absorption_free_cooperativity(r, d);
    Ok(kappa.norm_sqr() * (0.5 * (1.0 + r)).powi(2) * (cc / (cc + 1.0)).powi(2))
}

/// The substitution chain behind the no-FWM efficiency, evaluated in the
/// linearised-absorption form (e^(−κ_sτ) ≈ 1 − κ_sτ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GorshkovChain {
    pub c_bb: f64,
    /// Γ_ℂ = Γ_s + ℂγ.
    pub gamma_cbb: Complex64,
    /// 𝒞 = ℂ(1/r)Γ_s/Γ_ℂ.
    pub coop: Complex64,
    /// ζ = 2Wγ(ℂ+1)/|Γ_ℂ|².
    pub zeta: f64,
    /// χ = (1+r)Γ_s/Γ_ℂ.
    pub chi: Complex64,
}

/// Requires k_sL = 0, no extra loss, and the dispersive phase included.
pub fn gorshkov_chain(p: &PhysicalParams, c: &CavityParams, w: f64) -> Result<GorshkovChain> {
    let ksl = p.ks_l.min(TAU - p.ks_l);
    if ksl > 1e-12 {
        return Err(Error::Precondition(format!("k_sL = {} is not 0 mod 2pi", p.ks_l)));
    }
    if c.extra_loss_s != 1.0 {
        return Err(Error::Precondition("cavity must be lossless apart from atoms".into()));
    }
    if c.atomic_phase != AtomicPhase::Included {
        return Err(Error::Precondition("atomic dispersion must enter the roundtrip phase".into()));
    }
    let det_s = Complex64::new(p.gamma, -p.delta_s);
    let c_bb = absorption_free_cooperativity(c.r, p.d);
    let gamma_cbb = det_s + c_bb * p.gamma;
    Ok(GorshkovChain {
        c_bb,
        gamma_cbb,
        coop: c_bb / c.r * det_s / gamma_cbb,
        zeta: 2.0 * w * p.gamma * (c_bb + 1.0) / gamma_cbb.norm_sqr(),
        chi: (1.0 + c.r) * det_s / gamma_cbb,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// Δ_FSR (rad/s).
    pub delta_fsr: f64,
    /// L = 2πc/Δ_FSR.
    pub length: f64,
    /// 𝒜 = λL.
    pub mode_area: f64,
}

/// Cavity of order m with signal resonant and anti-Stokes anti-resonant:
/// Δ_FSR = 4δ/(2m+1).
pub fn fsr_and_geometry(delta: f64, m: u32, lambda: f64) -> Result<Geometry> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::invalid("delta", "must be > 0"));
    }
    let delta_fsr = 4.0 * delta / (2 * m + 1) as f64;
    let length = TAU * C_LIGHT / delta_fsr;
    Ok(Geometry {
        delta_fsr,
        length,
        mode_area: lambda * length,
    })
}

/// Cavity linewidth Δ_FSR/ℱ (rad/s).
pub fn linewidth(delta_fsr: f64, finesse: f64) -> f64 {
    delta_fsr / finesse
}

/// δ_s = aΔ_FSR/ℱ_s.
pub fn bandwidth_limit(delta_fsr: f64, finesse_s: f64, a_margin: f64) -> f64 {
    a_margin * delta_fsr / finesse_s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalCoupler {
    pub r_opt: f64,
    pub chi_opt_half: f64,
}

/// r_opt = 1 − √2θ and χ_opt/2 = (√2 − sinθ)/(sinθ + √2cos²θ), where the
/// non-atomic roundtrip loss is μ_s/r = cos²θ.
pub fn optimal_coupler(theta: f64) -> Result<OptimalCoupler> {
    if !(0.0..1.0 / SQRT_2).contains(&theta) {
        return Err(Error::invalid("theta", format!("{theta} not in [0, 1/sqrt 2)")));
    }
    let (s, c) = theta.sin_cos();
    Ok(OptimalCoupler {
        r_opt: 1.0 - SQRT_2 * theta,
        chi_opt_half: (SQRT_2 - s) / (s + SQRT_2 * c * c),
    })
}

/// Resonant transmission χ = (1−r²)/(1 − r cos²θ) of a lossy cavity.
pub fn resonant_chi(r: f64, theta: f64) -> f64 {
    (1.0 - r * r) / (1.0 - r * theta.cos().powi(2))
}

/// Strong-suppression efficiency bound χ²/4.
pub fn efficiency_envelope(r: f64, theta: f64) -> f64 {
    0.25 * resonant_chi(r, theta).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlEnhancement {
    /// t_Ω/(1 − μ_Ω).
    pub exact: f64,
    /// √(2ℱ_Ω/π).
    pub approx: f64,
    pub rel_deviation: f64,
    pub finesse: f64,
}

pub fn control_enhancement(t_omega: f64, mu_omega: f64) -> Result<ControlEnhancement> {
    if !(mu_omega > 0.0 && mu_omega < 1.0) {
        return Err(Error::invalid("mu_omega", format!("{mu_omega} not in (0, 1)")));
    }
    if !(0.0..=1.0).contains(&t_omega) {
        return Err(Error::invalid("t_omega", format!("{t_omega} not in [0, 1]")));
    }
    let f = finesse(mu_omega);
    let exact = t_omega / (1.0 - mu_omega);
    let approx = (2.0 * f / PI).sqrt();
    Ok(ControlEnhancement {
        exact,
        approx,
        rel_deviation: (approx - exact).abs() / exact,
        finesse: f,
    })
}

/// Write-power advantage over free space, ℱ_s²ℱ_Ω²/π².
pub fn double_enhancement(finesse_s: f64, finesse_omega: f64) -> f64 {
    (finesse_s * finesse_omega / PI).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignRules {
    pub c_bb: f64,
    pub gamma_cbb: Complex64,
    pub finesse_s: f64,
    pub finesse_omega: f64,
    pub delta_fsr: f64,
    pub linewidth: f64,
    pub bandwidth_limit: f64,
    pub a_margin: f64,
    /// Loss angle of the extra (non-atomic) roundtrip loss.
    pub theta: f64,
    pub r_opt: f64,
    pub chi_opt_half: f64,
    /// Loss angle with the signal's atomic absorption added, cos²θ = μ_s/r.
    pub theta_loaded: f64,
    pub r_opt_loaded: f64,
    pub control_enhancement: f64,
}

impl DesignRules {
    /// Design numbers for a cavity; the control is taken to see the same
    /// coupler and losses as the signal.
    pub fn new(p: &PhysicalParams, c: &CavityParams, a_margin: f64) -> Result<Self> {
        let mu = c.r * c.extra_loss_s;
        let finesse_s = finesse(mu);
        let delta_fsr = TAU / c.tau;
        let theta = c.extra_loss_s.sqrt().acos();
        let oc = optimal_coupler(theta)?;
        let absorption = (-absorption_rates(p, c)?.0.re * c.tau).exp();
        let theta_loaded = (c.extra_loss_s * absorption).sqrt().acos();
        let r_opt_loaded = optimal_coupler(theta_loaded)?.r_opt;
        let ce = control_enhancement(c.t_r(), mu)?;
        let c_bb = absorption_free_cooperativity(c.r, p.d);
        let rules = DesignRules {
            c_bb,
            gamma_cbb: Complex64::new(p.gamma, -p.delta_s) + c_bb * p.gamma,
            finesse_s,
            finesse_omega: ce.finesse,
            delta_fsr,
            linewidth: linewidth(delta_fsr, finesse_s),
            bandwidth_limit: bandwidth_limit(delta_fsr, finesse_s, a_margin),
            a_margin,
            theta,
            r_opt: oc.r_opt,
            chi_opt_half: oc.chi_opt_half,
            theta_loaded,
            r_opt_loaded,
            control_enhancement: ce.exact,
        };
        debug_assert!(rules.bandwidth_limit < rules.delta_fsr || a_margin >= 1.0);
        Ok(rules)
    }
}
