//! Temporal modes sampled on the uniform ε grid.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;

/// Complex amplitude ψ(ε_k) on ε_k = k/(n−1), k = 0..n.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalMode {
    amplitude: Vec<Complex64>,
}

impl TemporalMode {
    pub fn new(amplitude: Vec<Complex64>) -> Result<Self> {
        if amplitude.len() < 2 {
            return Err(Error::invalid("grid_n", "need at least 2 samples"));
        }
        if amplitude.iter().any(|z| !z.is_finite()) {
            return Err(Error::invalid("amplitude", "non-finite sample"));
        }
        Ok(TemporalMode { amplitude })
    }

    pub fn from_fn(grid_n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if grid_n < 2 {
            return Err(Error::invalid("grid_n", "need at least 2 samples"));
        }
        Self::new(quad::grid(grid_n).into_iter().map(f).collect())
    }

    /// ψ = 1.
    pub fn flat(grid_n: usize) -> Result<Self> {
        Self::from_fn(grid_n, |_| Complex64::new(1.0, 0.0))
    }

    /// The mode the memory accepts completely, ∝ e^(−f*ε), normalised on the grid.
    pub fn optimal(grid_n: usize, f: Complex64) -> Result<Self> {
        Self::from_fn(grid_n, |t| (-f.conj() * t).exp())?.normalized()
    }

    pub fn grid_n(&self) -> usize {
        self.amplitude.len()
    }

    pub fn amplitude(&self) -> &[Complex64] {
        &self.amplitude
    }

    pub fn into_amplitude(self) -> Vec<Complex64> {
        self.amplitude
    }

    /// ⟨self|other⟩ by the trapezoid rule.
    pub fn inner(&self, other: &TemporalMode) -> Complex64 {
        assert_eq!(self.grid_n(), other.grid_n(), "grid mismatch");
        let v: Vec<Complex64> = self
            .amplitude
            .iter()
            .zip(&other.amplitude)
            .map(|(a, b)| a.conj() * b)
            .collect();
        quad::trapezoid(&v)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).re
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::invalid("amplitude", "mode has zero norm"));
        }
        self.amplitude.iter_mut().for_each(|z| *z /= n);
        Ok(self)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= 1e-12
    }

    /// Remove the component along `other` (Gram–Schmidt on the grid).
    pub fn orthogonalized_against(&self, other: &TemporalMode) -> Result<Self> {
        let c = other.inner(self) / other.norm_sqr();
        let amp = self
            .amplitude
            .iter()
            .zip(&other.amplitude)
            .map(|(a, b)| a - c * b)
            .collect();
        TemporalMode::new(amp)?.normalized()
    }

    /// Cosine similarity |⟨a|b⟩|/(‖a‖‖b‖).
    pub fn similarity(&self, other: &TemporalMode) -> f64 {
        self.inner(other).norm() / (self.norm_sqr() * other.norm_sqr()).sqrt()
    }
}

/// The input signal mode handed to the closed forms.
///
/// `Flat` and `Optimal` are evaluated analytically; `Sampled` by trapezoid
/// quadrature on its own grid.
#[derive(Debug, Clone, PartialEq)]
pub enum InputMode {
    Flat,
    /// ∝ e^(−f*ε) for the f of the point being evaluated (κ = 1).
    Optimal,
    Sampled(TemporalMode),
}

impl InputMode {
    /// Concrete samples of this mode on an n-point grid.
    pub fn sample(&self, grid_n: usize, f: Complex64) -> Result<TemporalMode> {
        match self {
            InputMode::Flat => TemporalMode::flat(grid_n),
            InputMode::Optimal => TemporalMode::optimal(grid_n, f),
            InputMode::Sampled(m) => {
                if m.grid_n() != grid_n {
                    return Err(Error::invalid("grid_n", "sampled mode has a different grid"));
                }
                Ok(m.clone())
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let InputMode::Sampled(m) = self {
            if !m.is_normalized() {
                return Err(Error::invalid("psi_in", "input mode must be normalised to 1"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn flat_is_normalised() {
        assert!(TemporalMode::flat(7).unwrap().is_normalized());
        assert!(TemporalMode::flat(1).is_err());
    }

    #[test]
    fn gram_schmidt() {
        let f = Complex64::new(-1.5, 4.0);
        let opt = TemporalMode::optimal(301, f).unwrap();
        let other = TemporalMode::from_fn(301, |t| Complex64::new(t, 1.0 - t * t)).unwrap();
        let perp = other.orthogonalized_against(&opt).unwrap();
        assert!(perp.inner(&opt).norm() < 1e-14);
        assert_relative_eq!(perp.norm_sqr(), 1.0, max_relative = 1e-13);
        assert_relative_eq!(opt.similarity(&opt), 1.0, max_relative = 1e-14);
    }
}
