//! Discretised storage and retrieval kernels.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::coupling::DerivedCoupling;
use crate::quad;

/// Kernel values K(ε_i, ε_j) on the uniform grid (no quadrature weights).
///
/// The δ(ε−ε′) part of M1 is not in `m1`; its coefficient is `m1_delta`.
#[derive(Debug, Clone)]
pub struct KernelMatrices {
    pub m1: DMatrix<Complex64>,
    pub m1_delta: Complex64,
    pub m2: DMatrix<Complex64>,
    pub m_fwm_1: DMatrix<Complex64>,
    pub m_fwm_2: DMatrix<Complex64>,
}

/// M_c(ε, ε′) = Θ(ε − ε′) e^(f(ε−ε′)) with Θ(0) = 1/2.
pub fn causal_kernel(f: Complex64, grid_n: usize) -> DMatrix<Complex64> {
    let eps = quad::grid(grid_n);
    DMatrix::from_fn(grid_n, grid_n, |i, j| {
        if i > j {
            (f * (eps[i] - eps[j])).exp()
        } else if i == j {
            Complex64::new(0.5, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// M(ε, ε′) = e^(f(ε−ε′)).
pub fn response_kernel(f: Complex64, grid_n: usize) -> DMatrix<Complex64> {
    let eps = quad::grid(grid_n);
    DMatrix::from_fn(grid_n, grid_n, |i, j| (f * (eps[i] - eps[j])).exp())
}

pub fn kernel_matrices(dc: &DerivedCoupling, grid_n: usize) -> KernelMatrices {
    let mc = causal_kernel(dc.f, grid_n);
    let m = response_kernel(dc.f, grid_n);
    let ef = dc.f.exp();
    let s2 = dc.signal_prefactor * dc.c_s * dc.c_s;
    let fw = dc.kernel_prefactor * dc.c_s * dc.c_a * dc.x;
    KernelMatrices {
        m1: &mc * s2,
        m1_delta: dc.t_eff,
        m2: &m * (s2 * ef),
        m_fwm_1: &mc * fw,
        m_fwm_2: &m * (fw * ef),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_f_gives_triangle() {
        let mc = causal_kernel(Complex64::new(0.0, 0.0), 5);
        for i in 0..5 {
            for j in 0..5 {
                let want = if i > j { 1.0 } else if i == j { 0.5 } else { 0.0 };
                assert_eq!(mc[(i, j)], Complex64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn response_kernel_is_rank_one() {
        let m = response_kernel(Complex64::new(-3.0, 7.0), 60);
        let sv = m.svd(false, false).singular_values;
        let mut s: Vec<f64> = sv.iter().copied().collect();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!(s[1] < 1e-10 * s[0]);
    }
}
