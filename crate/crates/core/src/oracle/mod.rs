//! Brute-force engines the closed forms are checked against.

pub mod kernel;
pub mod moments;

pub use kernel::{kernel_photon_numbers, KernelTraceReport, Richardson};
pub use moments::{integrate_intracavity, storage_retrieval, MomentState, TimeDomainReport, Trajectory};
