//! Time-domain integration of the intra-cavity equations, without the
//! bad-cavity elimination.
//!
//! # Equations
//!
//! Closing the single-pass Taylor expansion with the coupler boundary
//! condition gives, after multiplying through by r e^(ik_sL) (resp.
//! r e^(ik_aL)) so that the retardation term τ∂ₜ keeps a real coefficient,
//!
//! ```text
//! ṡ  = −λ_s s  + r e^(ik_sL)  iG (Ω/Γ_s) b  + (t_r/√τ) S_in
//! ȧ† = −λ_a* a† − r e^(−ik_aL) iG (Ω/Γ_a*) b + (t_r/√τ) A_in†
//! ḃ  = −iG (Ω/Γ_s) s + iG (Ω/Γ_a) a† − (1/Γ_s + 1/Γ_a*) Ω² b
//! ```
//!
//! with λ = (1 − μ e^(iφ))/τ, G = √(dγ/τ) and Ω real. Setting ṡ = ȧ = 0 gives
//! back the adiabatic spin-wave equation ∂ₜb = (f/W)Ω²b + …, so the closed
//! forms are the narrowband limit of this system.
//!
//! # Moments
//!
//! Write y = (s, a†, b)ᵀ, so ẏ = K(t)y + e_s (t_r/√τ)S_in + n A_in† with
//! n = (0, t_r/√τ, 0)ᵀ. The system is linear, so y splits into a c-number
//! mean m driven by the coherent input and a fluctuation driven by vacuum:
//!
//! ```text
//! ṁ = K m + e_s (t_r/√τ) ⟨S_in⟩.
//! ```
//!
//! For N_ij = ⟨δy_i† δy_j⟩, differentiate and use ⟨A_in(t)A_in†(t′)⟩ = δ(t−t′)
//! (the only non-vanishing vacuum correlator in a normally ordered product;
//! the S_in fluctuations are annihilators and drop out):
//!
//! ```text
//! Ṅ = K̄ N + N Kᵀ + n̄ nᵀ,   n̄ nᵀ = diag(0, t_r²/τ, 0).
//! ```
//!
//! N starts at zero (vacuum cavity, empty spin wave) and stays Hermitian with
//! non-negative diagonal. Its entries are ⟨s†s⟩, ⟨a a†⟩, ⟨b†b⟩ and the
//! correlators ⟨s†a†⟩, ⟨s†b⟩, ⟨a b⟩.
//!
//! # Output
//!
//! Keeping only the phase evolution across the medium, e^(ik_sL)S_L ≈ e^(iφ_s)S_0,
//! the coupler gives S_out = t_r e^(iφ_s) s/√τ − r S_in. The normally ordered
//! flux is therefore
//!
//! ```text
//! ⟨S_out†S_out⟩ = |t_r e^(iφ_s) m_s/√τ − r⟨S_in⟩|² + (t_r²/τ) N_ss,
//! ```
//!
//! the first term coherent and the second the four-wave-mixing noise.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::coupling::PulseShape;
use crate::error::{Error, Result};
use crate::model::MemoryModel;

const POSITIVITY_TOL: f64 = 1e-9;
const STEPS_PER_RATE: f64 = 50.0;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    pub mean_s: C,
    /// Mean of a† (the variable that is integrated).
    pub mean_a: C,
    pub mean_b: C,
    pub nss: C,
    /// ⟨a a†⟩ from the vacuum-driven part.
    pub naa: C,
    pub nbb: C,
    pub csa: C,
    pub csb: C,
    pub cab: C,
    pub t: f64,
}

impl MomentState {
    fn from_parts(m: &Vector3<C>, n: &Matrix3<C>, t: f64) -> Self {
        MomentState {
            mean_s: m[0],
            mean_a: m[1],
            mean_b: m[2],
            nss: n[(0, 0)],
            naa: n[(1, 1)],
            nbb: n[(2, 2)],
            csa: n[(0, 1)],
            csb: n[(0, 2)],
            cab: n[(1, 2)],
            t,
        }
    }
}

/// Integrated record. Fluxes are sampled at t0 + k·dt for every step.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub t0: f64,
    pub dt: f64,
    pub coherent_flux: Vec<f64>,
    pub noise_flux: Vec<f64>,
    /// Every `record_every`-th state.
    pub states: Vec<MomentState>,
}

impl Trajectory {
    fn window(&self, flux: &[f64], t_a: f64, t_b: f64) -> f64 {
        let last = flux.len() - 1;
        let ia = (((t_a - self.t0) / self.dt).round().max(0.0) as usize).min(last);
        let ib = (((t_b - self.t0) / self.dt).round().max(0.0) as usize).min(last);
        if ib <= ia {
            return 0.0;
        }
        let inner: f64 = flux[ia + 1..ib].iter().sum();
        self.dt * (inner + 0.5 * (flux[ia] + flux[ib]))
    }

    /// Coherent plus noise photons leaving the cavity in [t_a, t_b].
    pub fn photons(&self, t_a: f64, t_b: f64) -> f64 {
        self.coherent_photons(t_a, t_b) + self.noise_photons(t_a, t_b)
    }

    pub fn coherent_photons(&self, t_a: f64, t_b: f64) -> f64 {
        self.window(&self.coherent_flux, t_a, t_b)
    }

    pub fn noise_photons(&self, t_a: f64, t_b: f64) -> f64 {
        self.window(&self.noise_flux, t_a, t_b)
    }

    pub fn t_end(&self) -> f64 {
        self.t0 + self.dt * (self.coherent_flux.len() - 1) as f64
    }
}

struct System {
    lam_s: C,
    lam_a: C,
    cs: C,
    ca: C,
    bs: C,
    ba: C,
    shift: C,
    inj: f64,
    out: C,
    r: f64,
}

impl System {
    fn new(model: &MemoryModel) -> Self {
        let (p, c, rt) = (&model.phys, &model.cav, &model.rates);
        let i = C::i();
        let g = (p.d * p.gamma / c.tau).sqrt();
        let lam = |mu: f64, phi: f64| (1.0 - C::from_polar(mu, phi)) / c.tau;
        let t_r = c.t_r();
        System {
            lam_s: lam(rt.mu_s, rt.phi_s),
            lam_a: lam(rt.mu_a, rt.phi_a),
            cs: c.r * C::from_polar(1.0, p.ks_l) * i * g / rt.det_s,
            ca: -c.r * C::from_polar(1.0, -p.ka_l) * i * g / rt.det_a.conj(),
            bs: -i * g / rt.det_s,
            ba: i * g / rt.det_a,
            shift: -(1.0 / rt.det_s + 1.0 / rt.det_a.conj()),
            inj: t_r / c.tau.sqrt(),
            out: t_r * C::from_polar(1.0, rt.phi_s) / c.tau.sqrt(),
            r: c.r,
        }
    }

    fn k(&self, omega: f64) -> Matrix3<C> {
        let z = C::new(0.0, 0.0);
        Matrix3::new(
            -self.lam_s,
            z,
            self.cs * omega,
            z,
            -self.lam_a.conj(),
            self.ca * omega,
            self.bs * omega,
            self.ba * omega,
            self.shift * omega * omega,
        )
    }

    fn deriv(&self, omega: f64, s_in: C, m: &Vector3<C>, n: &Matrix3<C>) -> (Vector3<C>, Matrix3<C>) {
        let k = self.k(omega);
        let mut dm = k * m;
        dm[0] += self.inj * s_in;
        let mut dn = k.conjugate() * n + n * k.transpose();
        dn[(1, 1)] += self.inj * self.inj;
        (dm, dn)
    }
}

/// dt = 1/(50·max(|γ_s|, |γ_a|, Ω_max²/|Γ_s|)).
pub fn default_dt(model: &MemoryModel, omega_max: f64) -> f64 {
    let rt = &model.rates;
    let rate = rt
        .gamma_cav_s
        .norm()
        .max(rt.gamma_cav_a.norm())
        .max(omega_max * omega_max / rt.det_s.norm());
    1.0 / (STEPS_PER_RATE * rate)
}

/// Classical RK4 from vacuum over [t0, t1] with fixed step dt.
///
/// `rabi` is the real control envelope Ω(t) and `input` the coherent signal
/// amplitude ⟨S_in(t)⟩ (photons per unit time in |·|²).
pub fn integrate_intracavity(
    model: &MemoryModel,
    rabi: impl Fn(f64) -> f64,
    input: impl Fn(f64) -> C,
    t_span: (f64, f64),
    dt: f64,
    record_every: usize,
) -> Result<Trajectory> {
    let (t0, t1) = t_span;
    if !(dt > 0.0 && dt.is_finite()) || !(t1 > t0) {
        return Err(Error::invalid("dt", format!("need dt > 0 and t1 > t0, got dt={dt}, span=({t0}, {t1})")));
    }
    let steps = ((t1 - t0) / dt).ceil() as usize;
    let sys = System::new(model);
    let record_every = record_every.max(1);

    let mut m = Vector3::<C>::zeros();
    let mut n = Matrix3::<C>::zeros();
    let flux = |m: &Vector3<C>, n: &Matrix3<C>, s_in: C| {
        ((sys.out * m[0] - sys.r * s_in).norm_sqr(), (sys.inj * sys.inj) * n[(0, 0)].re)
    };
    let mut coherent = Vec::with_capacity(steps + 1);
    let mut noise = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps / record_every + 2);

    let (mut om, mut sin) = (rabi(t0), input(t0));
    let (fc, fn_) = flux(&m, &n, sin);
    coherent.push(fc);
    noise.push(fn_);
    states.push(MomentState::from_parts(&m, &n, t0));

    for k in 0..steps {
        let t = t0 + k as f64 * dt;
        let (om_h, sin_h) = (rabi(t + 0.5 * dt), input(t + 0.5 * dt));
        let (om_e, sin_e) = (rabi(t + dt), input(t + dt));
        let (half, full, sixth) = (C::new(0.5 * dt, 0.0), C::new(dt, 0.0), C::new(dt / 6.0, 0.0));
        let two = C::new(2.0, 0.0);
        let (k1m, k1n) = sys.deriv(om, sin, &m, &n);
        let (k2m, k2n) = sys.deriv(om_h, sin_h, &(m + k1m * half), &(n + k1n * half));
        let (k3m, k3n) = sys.deriv(om_h, sin_h, &(m + k2m * half), &(n + k2n * half));
        let (k4m, k4n) = sys.deriv(om_e, sin_e, &(m + k3m * full), &(n + k3n * full));
        m += (k1m + k2m * two + k3m * two + k4m) * sixth;
        n += (k1n + k2n * two + k3n * two + k4n) * sixth;
        om = om_e;
        sin = sin_e;

        let t_now = t + dt;
        for (i, name) in [(0, "<s^+s>"), (1, "<a a^+>"), (2, "<b^+b>")] {
            let v = n[(i, i)].re;
            if !v.is_finite() || v < -POSITIVITY_TOL {
                return Err(Error::Integration(format!(
                    "{name} = {v:e} at t = {t_now:e} s; step dt = {dt:e} s is unstable"
                )));
            }
        }
        if !(m[0].is_finite() && m[1].is_finite() && m[2].is_finite()) {
            return Err(Error::Integration(format!("mean field diverged at t = {t_now:e} s")));
        }
        let (fc, fn_) = flux(&m, &n, sin);
        coherent.push(fc);
        noise.push(fn_);
        if (k + 1) % record_every == 0 || k + 1 == steps {
            states.push(MomentState::from_parts(&m, &n, t_now));
        }
    }
    Ok(Trajectory {
        t0,
        dt,
        coherent_flux: coherent,
        noise_flux: noise,
        states,
    })
}

/// Photon numbers from a full storage-then-retrieval run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeDomainReport {
    /// Everything leaving the cavity during the write pulse.
    pub n_out_1: f64,
    /// Everything leaving the cavity during the read pulse.
    pub n_out_2: f64,
    /// Noise part of `n_out_2` (equal to N_out,2 with no input).
    pub noise_floor: f64,
    /// Noise part of `n_out_1`.
    pub storage_noise: f64,
    /// |⟨b⟩|² + ⟨b†b⟩ between the pulses.
    pub stored_excitations: f64,
    /// |⟨b⟩|² between the pulses.
    pub stored_coherent: f64,
    pub dt: f64,
    pub steps: usize,
}

/// Write then read with two copies of `pulse`, each carrying W = model.control.w.
///
/// The signal is S_in(t) = √N Ω(t) ψ(ε(t))/√W with ψ the unit-norm input mode
/// in ε and ε(t) the cumulative trapezoid of Ω²/W. `dt` defaults to
/// [`default_dt`].
pub fn storage_retrieval(
    model: &MemoryModel,
    pulse: PulseShape,
    n_in_1: f64,
    psi_in: impl Fn(f64) -> C,
    dt: Option<f64>,
) -> Result<TimeDomainReport> {
    let w = model.control.w;
    if !(w > 0.0) {
        return Err(Error::Precondition("storage needs a control with W > 0".into()));
    }
    if !(n_in_1 >= 0.0 && n_in_1.is_finite()) {
        return Err(Error::invalid("N_in_1", "must be finite and >= 0"));
    }
    let span = pulse.half_span();
    let omega_max = pulse.rabi(w, 0.0);
    let dt = dt.unwrap_or_else(|| default_dt(model, omega_max));

    // ε(t) on a half-step table over the write window
    let hstep = 0.5 * dt;
    let n_tab = (2.0 * span / hstep).ceil() as usize + 1;
    let mut eps = vec![0.0; n_tab];
    for k in 1..n_tab {
        let (ta, tb) = (-span + (k - 1) as f64 * hstep, -span + k as f64 * hstep);
        eps[k] = eps[k - 1] + 0.5 * hstep * (pulse.rabi(w, ta).powi(2) + pulse.rabi(w, tb).powi(2)) / w;
    }
    let total = eps[n_tab - 1];
    let eps_at = |t: f64| -> f64 {
        let x = ((t + span) / hstep).clamp(0.0, (n_tab - 1) as f64);
        let i = (x.floor() as usize).min(n_tab - 2);
        let frac = x - i as f64;
        (eps[i] * (1.0 - frac) + eps[i + 1] * frac) / total
    };

    let t_read = 2.0 * span;
    let rabi = |t: f64| pulse.rabi(w, t) + pulse.rabi(w, t - t_read);
    let amp = (n_in_1 / w).sqrt();
    let input = |t: f64| {
        if t > span {
            C::new(0.0, 0.0)
        } else {
            amp * pulse.rabi(w, t) * psi_in(eps_at(t))
        }
    };
    let mid = span;
    let to_mid = (((mid + span) / dt).round() as usize).max(1);
    let traj = integrate_intracavity(model, rabi, input, (-span, t_read + span), dt, to_mid)?;
    let steps = traj.coherent_flux.len() - 1;
    let between = traj.states[1];

    Ok(TimeDomainReport {
        n_out_1: traj.photons(-span, mid),
        n_out_2: traj.photons(mid, traj.t_end()),
        noise_floor: traj.noise_photons(mid, traj.t_end()),
        storage_noise: traj.noise_photons(-span, mid),
        stored_excitations: between.mean_b.norm_sqr() + between.nbb.re,
        stored_coherent: between.mean_b.norm_sqr(),
        dt,
        steps,
    })
}
