//! Quadrature helpers on [0, 1] and small complex special functions.

use num_complex::Complex64;

/// Uniform grid ε_k = k/(n−1).
pub fn grid(n: usize) -> Vec<f64> {
    let h = step(n);
    (0..n).map(|k| k as f64 * h).collect()
}

pub fn step(n: usize) -> f64 {
    1.0 / (n - 1) as f64
}

/// Composite trapezoid weights on the uniform grid.
pub fn trapezoid_weights(n: usize) -> Vec<f64> {
    let h = step(n);
    let mut w = vec![h; n];
    w[0] = 0.5 * h;
    w[n - 1] = 0.5 * h;
    w
}

pub fn trapezoid(v: &[Complex64]) -> Complex64 {
    let h = step(v.len());
    let inner: Complex64 = v[1..v.len() - 1].iter().sum();
    h * (inner + 0.5 * (v[0] + v[v.len() - 1]))
}

/// Gauss–Legendre nodes and weights on [0, 1].
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        // Newton on P_m starting from the Chebyshev-like guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 1.0 / ((1.0 - z * z) * dp * dp);
        x[i] = 0.5 * (1.0 - z);
        x[m - 1 - i] = 0.5 * (1.0 + z);
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

/// ∫₀¹ f with `panels` equal Gauss–Legendre panels of 20 points each.
pub fn integrate(f: impl Fn(f64) -> f64, panels: usize) -> f64 {
    let (x, w) = gauss_legendre(20);
    let ph = 1.0 / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let a = p as f64 * ph;
        for (xi, wi) in x.iter().zip(&w) {
            s += wi * ph * f(a + xi * ph);
        }
    }
    s
}

/// (e^z − 1)/z, accurate near z = 0.
pub fn exprel(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..24 {
            term = term * z / k as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Real counterpart of [`exprel`].
pub fn exprel_re(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        z.exp_m1() / z
    }
}
