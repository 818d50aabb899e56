//! Photon numbers and g² traces by direct quadrature of the discretised kernels.
//!
//! Every operator is applied on the uniform grid with the trapezoid rule. The
//! causal kernel jumps on the diagonal, so each single integral is taken over
//! its own grid-aligned interval: interior diagonal samples carry Θ(0) = 1/2
//! with weight h, which is exact for the jump, and the two corners where the
//! interval degenerates or ends on the jump are corrected by hand. That keeps
//! every quantity at O(h²), and the report Richardson-extrapolates between
//! grids n and 2n − 1 (which nest).
//!
//! The Gram kernels G = FF† of the noise operators are needed at every pair of
//! grid points. For the causal kernel
//!
//!   G₁(εᵢ, εₖ) = |c₁|² e^(fεᵢ) e^(f*εₖ) Sₘ,   Sₘ = ∫₀^εₘ e^(ζb) db,  m = min(i, k),
//!
//! with Sₘ the trapezoid prefix sum, and for the retrieval kernel the prefix
//! sum runs to the end of the grid. This is the same number the dense product
//! of the corrected kernel matrices gives (see `dense_gram`), at O(n²) cost
//! instead of O(n³).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::coupling::DerivedCoupling;
use crate::error::{Error, Result};
use crate::quad;
use crate::response::{InputMode, KernelMatrices};

const MIN_GRID: usize = 100;

/// One quantity at two nested grids and its Richardson extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Richardson {
    pub coarse: f64,
    pub fine: f64,
    pub extrapolated: f64,
    /// |fine − coarse|/3, the estimated error of `fine`.
    pub error: f64,
}

impl Richardson {
    fn new(coarse: f64, fine: f64) -> Self {
        Richardson {
            coarse,
            fine,
            extrapolated: (4.0 * fine - coarse) / 3.0,
            error: (fine - coarse).abs() / 3.0,
        }
    }

    fn single(v: f64) -> Self {
        Richardson {
            coarse: v,
            fine: v,
            extrapolated: v,
            error: f64::NAN,
        }
    }
}

/// Raw quadrature values on one grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridTraces {
    pub grid_n: usize,
    pub n_out_1: f64,
    pub n_out_2: f64,
    pub noise_floor: f64,
    pub tr_p1_sq: f64,
    pub tr_p2_sq: f64,
    /// tr{(M_FWM⁽¹⁾M_FWM⁽¹⁾†)²}.
    pub tr_fwm1_sq: f64,
    pub g2_out_1: f64,
    pub g2_out_2: f64,
}

/// N_out,j = tr{P_j} and the g²-relevant traces, with Richardson estimates.
///
/// Sampled modes exist only on their own grid, so they are evaluated once
/// and carry no error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTraceReport {
    pub grid_n: usize,
    pub fine_grid_n: usize,
    pub n_out_1: Richardson,
    pub n_out_2: Richardson,
    pub noise_floor: Richardson,
    pub tr_p1_sq: Richardson,
    pub tr_p2_sq: Richardson,
    pub tr_fwm1_sq: Richardson,
    pub g2_out_1: Richardson,
    pub g2_out_2: Richardson,
}

pub fn kernel_photon_numbers(
    dc: &DerivedCoupling,
    psi_in: &InputMode,
    n_in_1: f64,
    g2_in: f64,
    grid_n: usize,
) -> Result<KernelTraceReport> {
    if grid_n < MIN_GRID {
        return Err(Error::invalid("grid_n", format!("{grid_n} < {MIN_GRID}")));
    }
    if !(n_in_1 >= 0.0 && n_in_1.is_finite()) {
        return Err(Error::invalid("N_in_1", "must be finite and >= 0"));
    }
    psi_in.validate()?;
    if let InputMode::Sampled(m) = psi_in {
        if m.grid_n() != grid_n {
            return Err(Error::invalid("grid_n", "sampled mode has a different grid"));
        }
        let t = grid_traces(dc, m.amplitude(), n_in_1, g2_in);
        let r = Richardson::single;
        return Ok(KernelTraceReport {
            grid_n,
            fine_grid_n: grid_n,
            n_out_1: r(t.n_out_1),
            n_out_2: r(t.n_out_2),
            noise_floor: r(t.noise_floor),
            tr_p1_sq: r(t.tr_p1_sq),
            tr_p2_sq: r(t.tr_p2_sq),
            tr_fwm1_sq: r(t.tr_fwm1_sq),
            g2_out_1: r(t.g2_out_1),
            g2_out_2: r(t.g2_out_2),
        });
    }
    let fine_n = 2 * grid_n - 1;
    let a = grid_traces(dc, &analytic_samples(psi_in, dc, grid_n), n_in_1, g2_in);
    let b = grid_traces(dc, &analytic_samples(psi_in, dc, fine_n), n_in_1, g2_in);
    let r = Richardson::new;
    Ok(KernelTraceReport {
        grid_n,
        fine_grid_n: fine_n,
        n_out_1: r(a.n_out_1, b.n_out_1),
        n_out_2: r(a.n_out_2, b.n_out_2),
        noise_floor: r(a.noise_floor, b.noise_floor),
        tr_p1_sq: r(a.tr_p1_sq, b.tr_p1_sq),
        tr_p2_sq: r(a.tr_p2_sq, b.tr_p2_sq),
        tr_fwm1_sq: r(a.tr_fwm1_sq, b.tr_fwm1_sq),
        g2_out_1: r(a.g2_out_1, b.g2_out_1),
        g2_out_2: r(a.g2_out_2, b.g2_out_2),
    })
}

/// Input mode samples from the continuum definition (unit norm as a function).
fn analytic_samples(psi_in: &InputMode, dc: &DerivedCoupling, n: usize) -> Vec<Complex64> {
    match psi_in {
        InputMode::Flat => vec![Complex64::new(1.0, 0.0); n],
        InputMode::Optimal => {
            let norm = 1.0 / quad::exprel_re(dc.zeta).sqrt();
            quad::grid(n).into_iter().map(|t| norm * (-dc.f.conj() * t).exp()).collect()
        }
        InputMode::Sampled(m) => m.amplitude().to_vec(),
    }
}

fn trapezoid_prefix(vals: &[f64], h: f64) -> Vec<f64> {
    let mut s = vec![0.0; vals.len()];
    for m in 1..vals.len() {
        s[m] = s[m - 1] + 0.5 * h * (vals[m - 1] + vals[m]);
    }
    s
}

/// Forward action of the causal kernel, ∫₀^εᵢ e^(f(εᵢ−ε′))ψ(ε′)dε′, by trapezoid.
pub fn causal_action(f: Complex64, psi: &[Complex64]) -> Vec<Complex64> {
    let n = psi.len();
    let h = quad::step(n);
    let table: Vec<Complex64> = (0..n).map(|k| (f * (k as f64 * h)).exp()).collect();
    (0..n)
        .map(|i| {
            if i == 0 {
                return Complex64::new(0.0, 0.0);
            }
            let mut acc = 0.5 * (table[i] * psi[0] + psi[i]);
            for j in 1..i {
                acc += table[i - j] * psi[j];
            }
            acc * h
        })
        .collect()
}

pub fn grid_traces(dc: &DerivedCoupling, psi: &[Complex64], n_in_1: f64, g2_in: f64) -> GridTraces {
    let n = psi.len();
    let h = quad::step(n);
    let eps = quad::grid(n);
    let w = quad::trapezoid_weights(n);
    let z = dc.zeta;

    let s2 = dc.signal_prefactor * dc.c_s * dc.c_s;
    let c1 = (dc.kernel_prefactor * dc.c_s * dc.c_a * dc.x).norm_sqr();
    let c2 = c1 * (2.0 * dc.f.re).exp();

    let u: Vec<Complex64> = eps.iter().map(|&t| (dc.f * t).exp()).collect();
    let u2: Vec<f64> = u.iter().map(|v| v.norm_sqr()).collect();
    let s = trapezoid_prefix(&eps.iter().map(|&t| (z * t).exp()).collect::<Vec<_>>(), h);
    let s_end = s[n - 1];

    // φ₁ = M₁ψ, φ₂ = M₂ψ
    let phi1: Vec<Complex64> = causal_action(dc.f, psi)
        .into_iter()
        .zip(psi)
        .map(|(t, p)| s2 * t + dc.t_eff * p)
        .collect();
    let proj: Complex64 = (0..n).map(|j| w[j] * (-dc.f * eps[j]).exp() * psi[j]).sum();
    let amp2 = s2 * dc.f.exp() * proj;
    let phi2: Vec<Complex64> = u.iter().map(|v| amp2 * v).collect();
    let norm = |p: &[Complex64]| -> f64 { (0..n).map(|i| w[i] * p[i].norm_sqr()).sum() };
    let (nrm1, nrm2) = (norm(&phi1), norm(&phi2));

    let q1 = |i: usize, k: usize| c1 * s[i.min(k)];
    let q2 = |i: usize, k: usize| c1 * s[i.min(k)] + c2 * s_end;

    let tr_g1: f64 = (0..n).map(|i| w[i] * u2[i] * c1 * s[i]).sum();
    let tr_g2: f64 = (0..n).map(|i| w[i] * u2[i] * c2 * s_end).sum();

    let tr_sq = |q: &dyn Fn(usize, usize) -> f64| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            let mut row = 0.0;
            for k in 0..n {
                row += w[k] * u2[k] * q(i, k).powi(2);
            }
            acc += w[i] * u2[i] * row;
        }
        acc
    };
    let sandwich = |phi: &[Complex64], q: &dyn Fn(usize, usize) -> f64| -> f64 {
        let p: Vec<Complex64> = (0..n).map(|i| w[i] * phi[i].conj() * u[i]).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for (k, pk) in p.iter().enumerate() {
                row += pk.conj() * q(i, k);
            }
            acc += p[i] * row;
        }
        acc.re
    };

    let tr_fwm1_sq = tr_sq(&q1);
    let tr_q2_sq = tr_sq(&q2);
    let x1 = if n_in_1 > 0.0 { sandwich(&phi1, &q1) } else { 0.0 };
    let x2 = if n_in_1 > 0.0 { sandwich(&phi2, &q2) } else { 0.0 };

    let n_out_1 = n_in_1 * nrm1 + tr_g1;
    let noise_floor = tr_g1 + tr_g2;
    let n_out_2 = n_in_1 * nrm2 + noise_floor;
    let nn = n_in_1 * n_in_1;
    let tr_p1_sq = nn * nrm1 * nrm1 + 2.0 * n_in_1 * x1 + tr_fwm1_sq;
    let tr_p2_sq = nn * nrm2 * nrm2 + 2.0 * n_in_1 * x2 + tr_q2_sq;
    let g2 = |tr_sq: f64, nrm: f64, n_out: f64| {
        if n_out > 0.0 {
            1.0 + (tr_sq - (2.0 - g2_in) * nn * nrm * nrm) / (n_out * n_out)
        } else {
            f64::NAN
        }
    };
    GridTraces {
        grid_n: n,
        n_out_1,
        n_out_2,
        noise_floor,
        tr_p1_sq,
        tr_p2_sq,
        tr_fwm1_sq,
        g2_out_1: g2(tr_p1_sq, nrm1, n_out_1),
        g2_out_2: g2(tr_p2_sq, nrm2, n_out_2),
    }
}

/// G = FF† from the sampled kernel values, by weighted matrix product.
///
/// For a causal kernel (Θ(0) = 1/2 on the diagonal) the corners are fixed up:
/// the b = ε integration endpoint of a diagonal entry needs the one-sided
/// value, and G(0, ·) integrates over an empty interval.
pub fn dense_gram(k: &DMatrix<Complex64>, causal: bool) -> DMatrix<Complex64> {
    let n = k.nrows();
    let h = quad::step(n);
    let w = quad::trapezoid_weights(n);
    let kw = DMatrix::from_fn(n, n, |i, j| k[(i, j)] * w[j]);
    let mut g = &kw * k.adjoint();
    if causal {
        for i in 1..n {
            g[(i, i)] += (0.5 * h * 4.0 - w[i]) * k[(i, i)].norm_sqr();
        }
        for i in 0..n {
            g[(0, i)] = Complex64::new(0.0, 0.0);
            g[(i, 0)] = Complex64::new(0.0, 0.0);
        }
    }
    g
}

/// Forward action of a causal kernel matrix (Θ(0) = 1/2) on samples.
pub fn dense_causal_action(k: &DMatrix<Complex64>, psi: &[Complex64]) -> Vec<Complex64> {
    let n = k.nrows();
    let w = quad::trapezoid_weights(n);
    let mut out: Vec<Complex64> = (0..n).map(|i| (0..n).map(|j| k[(i, j)] * w[j] * psi[j]).sum()).collect();
    out[0] = Complex64::new(0.0, 0.0);
    out[n - 1] += k[(n - 1, n - 1)] * w[n - 1] * psi[n - 1];
    out
}

/// tr{(FF†)²} and tr{FF†} of the storage FWM kernel from the dense matrices.
pub fn dense_storage_traces(km: &KernelMatrices) -> (f64, f64) {
    let g = dense_gram(&km.m_fwm_1, true);
    let n = g.nrows();
    let w = quad::trapezoid_weights(n);
    let tr: f64 = (0..n).map(|i| w[i] * g[(i, i)].re).sum();
    let mut tr_sq = 0.0;
    for i in 0..n {
        for k in 0..n {
            tr_sq += w[i] * w[k] * g[(i, k)].norm_sqr();
        }
    }
    (tr, tr_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::{self, kernel_matrices};
    use crate::response::tests::{model, try_model};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn dense_and_structured_agree() {
        let m = model(0.9, 30.0, 100.0, 2.0, 1.3);
        let n = 151;
        let km = kernel_matrices(&m.dc, n);
        let psi: Vec<Complex64> = quad::grid(n).iter().map(|&t| Complex64::new(1.0 + t, -t * t)).collect();
        let t = grid_traces(&m.dc, &psi, 0.0, 0.0);
        let (tr, tr_sq) = dense_storage_traces(&km);
        assert!(rel(tr, t.n_out_1) < 1e-12);
        assert!(rel(tr_sq, t.tr_fwm1_sq) < 1e-12);
        let dense = dense_causal_action(&km.m1, &psi);
        let s2 = m.dc.signal_prefactor * m.dc.c_s * m.dc.c_s;
        for (a, b) in dense.iter().zip(causal_action(m.dc.f, &psi)) {
            assert!((a - s2 * b).norm() < 1e-12 * s2.norm());
        }
        let g2 = dense_gram(&km.m_fwm_2, false);
        let w = quad::trapezoid_weights(n);
        let tr2: f64 = (0..n).map(|i| w[i] * g2[(i, i)].re).sum();
        assert!(rel(tr + tr2, grid_traces(&m.dc, &psi, 0.0, 0.0).noise_floor) < 1e-12);
    }

    #[test]
    fn no_interaction() {
        let m = model(0.9, 30.0, 100.0, 2.0, 1.0).with_w(0.0).unwrap();
        let r = kernel_photon_numbers(&m.dc, &InputMode::Flat, 2.0, 0.0, 200).unwrap();
        assert!(rel(r.n_out_1.extrapolated, 2.0 * m.dc.t_eff.norm_sqr()) < 1e-12);
        assert_eq!(r.noise_floor.extrapolated, 0.0);
        assert_eq!(r.n_out_2.extrapolated, 0.0);
    }

    #[test]
    fn matches_closed_forms() {
        for (mode, zeta) in [(InputMode::Flat, 0.7), (InputMode::Optimal, 2.5), (InputMode::Flat, -0.3)] {
            let Some(m) = try_model(0.85, 40.0, 60.0, 2.5, zeta) else { continue };
            let n_in = 1.3;
            let cf = response::evaluate(&mode, n_in, 0.5, &m.dc, 2000).unwrap();
            let r = kernel_photon_numbers(&m.dc, &mode, n_in, 0.5, 400).unwrap();
            assert!(rel(r.n_out_1.extrapolated, cf.n_out_1) < 1e-8, "{mode:?}");
            assert!(rel(r.n_out_2.extrapolated, cf.n_out_2) < 1e-8);
            assert!(rel(r.noise_floor.extrapolated, cf.noise_floor) < 1e-8);
            assert!(rel(r.tr_fwm1_sq.extrapolated, response::storage_fwm_trace_sq(&m.dc)) < 1e-8);
            assert!(rel(r.g2_out_2.extrapolated, cf.g2_out_2) < 1e-7);
            assert!(rel(r.g2_out_1.extrapolated, cf.g2_out_1) < 1e-5);
        }
    }

    #[test]
    fn second_order_convergence() {
        let m = model(0.9, 30.0, 100.0, 2.0, 1.0);
        let exact = response::evaluate(&InputMode::Flat, 1.0, 0.0, &m.dc, 2000).unwrap();
        let e = |n| {
            let r = kernel_photon_numbers(&m.dc, &InputMode::Flat, 1.0, 0.0, n).unwrap();
            (r.n_out_1.coarse - exact.n_out_1).abs()
        };
        let ratio = e(101) / e(201);
        assert!((3.0..=5.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn sampled_mode_single_grid() {
        let m = model(0.9, 30.0, 100.0, 2.0, 1.0);
        let psi = crate::response::TemporalMode::from_fn(300, |t| Complex64::new(1.0, t)).unwrap().normalized().unwrap();
        let mode = InputMode::Sampled(psi);
        let r = kernel_photon_numbers(&m.dc, &mode, 1.0, 0.0, 300).unwrap();
        assert!(r.n_out_1.error.is_nan());
        let cf = response::evaluate(&mode, 1.0, 0.0, &m.dc, 300).unwrap();
        assert!(rel(r.n_out_2.fine, cf.n_out_2) < 1e-4);
        assert!(kernel_photon_numbers(&m.dc, &mode, 1.0, 0.0, 301).is_err());
        assert!(kernel_photon_numbers(&m.dc, &InputMode::Flat, 1.0, 0.0, 99).is_err());
    }
}
