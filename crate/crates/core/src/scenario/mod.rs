//! Presets, configuration and the parameter-scan engine behind the CLI.

pub mod config;
pub mod energy;
pub mod preset;
pub mod report;
pub mod scan;

pub use config::ScanConfig;
pub use energy::EnergyMap;
pub use preset::{cs_preset, Preset};
pub use scan::{run_scan, ScanOptions, ScanTable};
