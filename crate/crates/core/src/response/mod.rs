//! Closed-form memory response: photon numbers, efficiencies, SNR and g².
//!
//! The signal kernels carry r e^(i(φ_s+k_sL)) χ C_s² and the FWM kernels
//! −r e^(i(φ_s+k_sL)) χ C_sC_ax; both prefactors have modulus r|χ|. Input
//! modes are normalised, ⟨ψ_in|ψ_in⟩ = 1.

pub mod aux;
pub mod kernels;
pub mod mode;

use num_complex::Complex64;

use crate::coupling::DerivedCoupling;
use crate::error::{Error, Result};
use crate::quad;

pub use kernels::{kernel_matrices, KernelMatrices};
pub use mode::{InputMode, TemporalMode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryResult {
    pub n_out_1: f64,
    pub n_out_2: f64,
    pub noise_floor: f64,
    /// 1 − ⟨φ₁|φ₁⟩.
    pub eta_store: f64,
    /// η_tot / η_store.
    pub eta_ret: f64,
    /// Noise-subtracted total efficiency.
    pub eta_tot: f64,
    pub snr: f64,
    /// NaN when the output is empty.
    pub g2_out_1: f64,
    pub g2_out_2: f64,
    pub kappa_overlap: Complex64,
    pub n_in_1: f64,
    pub g2_in: f64,
}

/// The storage output mode φ₁ for a sampled input, by cumulative trapezoid.
pub fn storage_output_mode(psi_in: &TemporalMode, dc: &DerivedCoupling) -> TemporalMode {
    let a = dc.signal_prefactor * dc.c_s * dc.c_s;
    let n = psi_in.grid_n();
    let h = quad::step(n);
    let efh = (dc.f * h).exp();
    let p = psi_in.amplitude();
    // u_k = e^{fε_k} ψ(ε_k)
    let mut u = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(n);
    out.push(dc.t_eff * p[0]);
    for k in 1..n {
        u = efh * u + 0.5 * h * (efh * p[k - 1] + p[k]);
        out.push(a * u + dc.t_eff * p[k]);
    }
    TemporalMode::new(out).expect("finite inputs give finite output")
}

/// φ₁ on an n-point grid; analytic samples for the flat and optimal modes.
pub fn storage_output_samples(mode: &InputMode, dc: &DerivedCoupling, grid_n: usize) -> Result<TemporalMode> {
    match mode {
        InputMode::Sampled(m) => {
            if m.grid_n() != grid_n {
                return Err(Error::invalid("grid_n", "sampled mode has a different grid"));
            }
            Ok(storage_output_mode(m, dc))
        }
        _ => TemporalMode::from_fn(grid_n, |t| phi1_analytic(mode, dc, t)),
    }
}

fn phi1_analytic(mode: &InputMode, dc: &DerivedCoupling, t: f64) -> Complex64 {
    let a = dc.signal_prefactor * dc.c_s * dc.c_s;
    match mode {
        // ψ(ε) = (1 − e^{−fε})/f, so e^{fε}ψ = ε·exprel(fε)
        InputMode::Flat => a * t * quad::exprel(dc.f * t) + dc.t_eff,
        // ψ_in = N e^{−f*ε}: e^{fε}ψ(ε) = N e^{fε} ε exprel(ζε), with
        // N = e^{−ζ/2}/√E(ζ) folded into the exponents
        InputMode::Optimal => {
            let (f, z) = (dc.f, dc.zeta);
            let s = 1.0 / aux::e(z).sqrt();
            let stored = if (z * t).abs() < 1.0 {
                (f * t - 0.5 * z).exp() * t * quad::exprel_re(z * t)
            } else {
                ((f * t + z * (t - 0.5)).exp() - (f * t - 0.5 * z).exp()) / z
            };
            s * (a * stored + dc.t_eff * (-f.conj() * t - 0.5 * z).exp())
        }
        InputMode::Sampled(_) => unreachable!("sampled modes are not analytic"),
    }
}

/// ⟨φ₁|φ₁⟩.
pub fn phi1_norm_sqr(mode: &InputMode, dc: &DerivedCoupling) -> Result<f64> {
    match mode {
        InputMode::Sampled(m) => Ok(storage_output_mode(m, dc).norm_sqr()),
        _ => {
            let panels = 1 + (dc.f.norm() / 4.0).ceil() as usize;
            Ok(quad::integrate(|t| phi1_analytic(mode, dc, t).norm_sqr(), panels))
        }
    }
}

/// Storage-pass FWM photons |rχC_sC_ax|²(1−E)/ζ.
pub fn storage_noise(dc: &DerivedCoupling) -> f64 {
    fwm_amp_sqr(dc) * aux::one_minus_e_over_z(dc.zeta)
}

/// N_out,1 = N_in,1⟨φ₁|φ₁⟩ + |rχC_sC_ax|²(1−E)/ζ.
pub fn transmitted_photons(mode: &InputMode, n_in_1: f64, dc: &DerivedCoupling) -> Result<f64> {
    check_n_in(n_in_1)?;
    Ok(n_in_1 * phi1_norm_sqr(mode, dc)? + storage_noise(dc))
}

/// κ = (e^ζE)^(−1/2) ψ(1).
///
/// For sampled modes the overlap and the norm of e^(−f*ε) are both taken by
/// trapezoid on the mode's grid, so the optimal mode gives κ = 1 and its
/// orthogonal complement κ = 0 to rounding.
pub fn retrieval_overlap_kappa(mode: &InputMode, f: Complex64, zeta: f64) -> Complex64 {
    match mode {
        // exprel(−f)/√(e^ζ E) with e^{−ζ/2} moved inside
        InputMode::Flat => {
            let num = if f.norm() < 1.0 {
                quad::exprel(-f) * (-0.5 * zeta).exp()
            } else {
                ((-f - 0.5 * zeta).exp() - (-0.5 * zeta).exp()) / -f
            };
            num / aux::e(zeta).sqrt()
        }
        InputMode::Optimal => Complex64::new(1.0, 0.0),
        InputMode::Sampled(m) => {
            let target = TemporalMode::from_fn(m.grid_n(), |t| (-f.conj() * t).exp())
                .expect("grid_n >= 2");
            target.inner(m) / target.norm_sqr().sqrt()
        }
    }
}

/// (N_out,2, noise floor) with N_out,2 = |rχC_s|²[|C_sEκ|²N + |C_ax|²g(ζ)].
pub fn retrieved_photons(n_in_1: f64, kappa: Complex64, dc: &DerivedCoupling) -> Result<(f64, f64)> {
    check_n_in(n_in_1)?;
    let (signal, noise) = retrieval_terms(n_in_1, kappa, dc);
    Ok((signal + noise, noise))
}

fn retrieval_terms(n_in_1: f64, kappa: Complex64, dc: &DerivedCoupling) -> (f64, f64) {
    let pre = (dc.signal_prefactor * dc.c_s).norm_sqr();
    let e = aux::e(dc.zeta);
    let signal = pre * (dc.c_s * e * kappa).norm_sqr() * n_in_1;
    let noise = pre * (dc.c_a * dc.x).norm_sqr() * aux::g(dc.zeta);
    (signal, noise)
}

/// η_tot = |rχC_s²Eκ|².
pub fn efficiency(kappa: Complex64, dc: &DerivedCoupling) -> f64 {
    (dc.signal_prefactor * dc.c_s * dc.c_s * aux::e(dc.zeta) * kappa).norm_sqr()
}

/// SNR = N|κ|²|Γ_a/Γ_s|²(E²/g)/|x|², written as |C_s/C_a|² = |Γ_a/Γ_s|².
/// +∞ when there is no FWM noise.
pub fn snr(n_in_1: f64, kappa: Complex64, dc: &DerivedCoupling) -> f64 {
    let den = (dc.c_a * dc.x).norm_sqr() * aux::g(dc.zeta);
    if den == 0.0 {
        return f64::INFINITY;
    }
    let e = aux::e(dc.zeta);
    n_in_1 * kappa.norm_sqr() * (dc.c_s * e).norm_sqr() / den
}

/// SNR from the detuning ratio, the product form quoted in the literature.
pub fn snr_product_form(n_in_1: f64, kappa: Complex64, det_s: Complex64, det_a: Complex64, dc: &DerivedCoupling) -> f64 {
    let den = aux::g(dc.zeta) * dc.x.norm_sqr();
    if den == 0.0 || dc.c_a == Complex64::new(0.0, 0.0) {
        return f64::INFINITY;
    }
    let e = aux::e(dc.zeta);
    n_in_1 * kappa.norm_sqr() * (det_a / det_s).norm_sqr() * e * e / den
}

/// tr{(M_FWM⁽¹⁾M_FWM⁽¹⁾†)²} = |rχC_sC_ax|⁴ζ⁻⁴{4ζ(1−E) − 2ζ²E − Σ}.
pub fn storage_fwm_trace_sq(dc: &DerivedCoupling) -> f64 {
    fwm_amp_sqr(dc).powi(2) * aux::trm_bracket(dc.zeta)
}

/// ⟨φ₁|M_FWM⁽¹⁾M_FWM⁽¹⁾†|φ₁⟩ = |rχC_sC_ax|²‖M_c†φ₁‖², by trapezoid.
pub fn storage_cross_term(phi1: &TemporalMode, dc: &DerivedCoupling) -> f64 {
    let n = phi1.grid_n();
    let h = quad::step(n);
    let e = (dc.f.conj() * h).exp();
    let p = phi1.amplitude();
    // v_k = ∫_{ε_k}^1 e^{f*(ε−ε_k)} φ₁(ε) dε
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in (0..n - 1).rev() {
        v[k] = e * v[k + 1] + 0.5 * h * (p[k] + e * p[k + 1]);
    }
    let sq: Vec<Complex64> = v.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
    fwm_amp_sqr(dc) * quad::trapezoid(&sq).re
}

/// Storage-pass g⁽²⁾ from the three-term decomposition; the cross term by quadrature.
pub fn g2_storage(mode: &InputMode, n_in_1: f64, g2_in: f64, dc: &DerivedCoupling, grid_n: usize) -> Result<f64> {
    check_n_in(n_in_1)?;
    check_g2_in(g2_in)?;
    let phi1 = storage_output_samples(mode, dc, grid_n)?;
    let norm = match mode {
        InputMode::Sampled(_) => phi1.norm_sqr(),
        _ => phi1_norm_sqr(mode, dc)?,
    };
    let n_out = n_in_1 * norm + storage_noise(dc);
    if n_out <= 0.0 {
        return Err(Error::UndefinedStatistics("N_out,1 = 0"));
    }
    let cross = if n_in_1 > 0.0 { storage_cross_term(&phi1, dc) } else { 0.0 };
    let num = (g2_in - 1.0) * (n_in_1 * norm).powi(2) + storage_fwm_trace_sq(dc) + 2.0 * n_in_1 * cross;
    Ok(1.0 + num / (n_out * n_out))
}

/// Retrieval g⁽²⁾:
/// N²_out,2[g2−1] = |rχC_s|⁴{(g2_in−1)N²|C_sEκ|⁴ + |C_ax|⁴h + 2N|C_sC_axκ|²h′}.
pub fn g2_retrieval(n_in_1: f64, g2_in: f64, kappa: Complex64, dc: &DerivedCoupling) -> Result<f64> {
    check_n_in(n_in_1)?;
    check_g2_in(g2_in)?;
    let (signal, noise) = retrieval_terms(n_in_1, kappa, dc);
    let n_out = signal + noise;
    if n_out <= 0.0 {
        return Err(Error::UndefinedStatistics("N_out,2 = 0"));
    }
    let pre = (dc.signal_prefactor * dc.c_s).norm_sqr().powi(2);
    let e = aux::e(dc.zeta);
    let sig = (dc.c_s * e * kappa).norm_sqr();
    let fwm = (dc.c_a * dc.x).norm_sqr();
    let mix = (dc.c_s * dc.c_a * dc.x * kappa).norm_sqr();
    let num = pre
        * ((g2_in - 1.0) * n_in_1 * n_in_1 * sig * sig
            + fwm * fwm * aux::h(dc.zeta)
            + 2.0 * n_in_1 * mix * aux::h_prime(dc.zeta));
    Ok(1.0 + num / (n_out * n_out))
}

/// φ₂(ε) = A C_s² e^f (e^ζE)^(1/2) κ e^(fε).
pub fn retrieved_mode(kappa: Complex64, dc: &DerivedCoupling, grid_n: usize) -> Result<TemporalMode> {
    let amp = dc.signal_prefactor * dc.c_s * dc.c_s * (dc.f + 0.5 * dc.zeta).exp() * aux::e(dc.zeta).sqrt() * kappa;
    TemporalMode::from_fn(grid_n, |t| amp * (dc.f * t).exp())
}

/// All closed-form outputs for one operating point.
pub fn evaluate(mode: &InputMode, n_in_1: f64, g2_in: f64, dc: &DerivedCoupling, grid_n: usize) -> Result<MemoryResult> {
    mode.validate()?;
    check_n_in(n_in_1)?;
    check_g2_in(g2_in)?;
    let kappa = retrieval_overlap_kappa(mode, dc.f, dc.zeta);
    let norm1 = phi1_norm_sqr(mode, dc)?;
    let n_out_1 = n_in_1 * norm1 + storage_noise(dc);
    let (n_out_2, noise_floor) = retrieved_photons(n_in_1, kappa, dc)?;
    let eta_tot = efficiency(kappa, dc);
    let eta_store = 1.0 - norm1;
    let undefined = |r: Result<f64>| match r {
        Ok(v) => Ok(v),
        Err(Error::UndefinedStatistics(_)) => Ok(f64::NAN),
        Err(e) => Err(e),
    };
    Ok(MemoryResult {
        n_out_1,
        n_out_2,
        noise_floor,
        eta_store,
        eta_ret: if eta_store != 0.0 { eta_tot / eta_store } else { f64::NAN },
        eta_tot,
        snr: snr(n_in_1, kappa, dc),
        g2_out_1: undefined(g2_storage(mode, n_in_1, g2_in, dc, grid_n))?,
        g2_out_2: undefined(g2_retrieval(n_in_1, g2_in, kappa, dc))?,
        kappa_overlap: kappa,
        n_in_1,
        g2_in,
    })
}

fn fwm_amp_sqr(dc: &DerivedCoupling) -> f64 {
    (dc.kernel_prefactor * dc.c_s * dc.c_a * dc.x).norm_sqr()
}

fn check_n_in(n: f64) -> Result<()> {
    if n.is_finite() && n >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("n_in_1", format!("{n} must be finite and >= 0")))
    }
}

fn check_g2_in(g: f64) -> Result<()> {
    if g.is_finite() && g >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("g2_in", format!("{g} must be finite and >= 0")))
    }
}

#[cfg(test)]
pub(crate) mod tests;
