//! Four-wave-mixing noise in a cavity-enhanced Λ quantum memory.
//!
//! The closed forms live in [`response`] and [`limits`]; [`oracle`] holds the
//! brute-force engines they are checked against, and [`scenario`] the CLI-facing
//! presets, config and scan machinery.

pub mod coupling;
pub mod error;
pub mod limits;
pub mod model;
pub mod oracle;
pub mod params;
pub mod quad;
pub mod response;
pub mod scenario;

pub use coupling::{ControlParams, DerivedCoupling, PulseShape};
pub use error::{Error, Result};
pub use model::MemoryModel;
pub use params::{AtomicPhase, CavityParams, ComplexRates, PhysicalParams};
pub use response::{InputMode, MemoryResult, TemporalMode};
