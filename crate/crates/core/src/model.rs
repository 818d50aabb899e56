use crate::coupling::{ControlParams, DerivedCoupling};
use crate::error::{Error, Result};
use crate::params::{CavityParams, ComplexRates, PhysicalParams};

/// One fully specified operating point: inputs plus everything derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryModel {
    pub phys: PhysicalParams,
    pub cav: CavityParams,
    pub control: ControlParams,
    pub rates: ComplexRates,
    pub dc: DerivedCoupling,
}

impl MemoryModel {
    pub fn new(phys: PhysicalParams, cav: CavityParams, control: ControlParams) -> Result<Self> {
        let rates = ComplexRates::new(&phys, &cav)?;
        let dc = DerivedCoupling::new(&phys, &cav, &rates, control.w)?;
        Ok(MemoryModel {
            phys,
            cav,
            control,
            rates,
            dc,
        })
    }

    pub fn with_w(&self, w: f64) -> Result<Self> {
        let control = ControlParams { w, ..self.control };
        ControlParams::new(w)?;
        let dc = DerivedCoupling::new(&self.phys, &self.cav, &self.rates, w)?;
        Ok(MemoryModel {
            control,
            dc,
            ..*self
        })
    }

    /// dζ/dW; ζ is exactly linear in W.
    pub fn zeta_per_w(&self) -> Result<f64> {
        Ok(DerivedCoupling::new(&self.phys, &self.cav, &self.rates, 1.0)?.zeta)
    }

    /// The same point with W chosen so that ζ takes the given value.
    pub fn with_zeta(&self, zeta: f64) -> Result<Self> {
        let slope = self.zeta_per_w()?;
        let w = zeta / slope;
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::Precondition(format!(
                "zeta = {zeta} unreachable: dzeta/dW = {slope:e}"
            )));
        }
        self.with_w(w)
    }
}
