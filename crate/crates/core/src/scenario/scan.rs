//! Scan evaluation: every point is pure, so points run on a bounded rayon pool
//! and are gathered back in input order.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limits::{DesignRules, DEFAULT_A_MARGIN};
use crate::oracle::kernel_photon_numbers;
use crate::response::{self, MemoryResult};

use super::config::{AxisPath, Point, PointSpec, ScanConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub jobs: usize,
    pub verify: bool,
    pub grid_n: usize,
    pub photon_tolerance: f64,
    pub g2_tolerance: f64,
}

impl ScanOptions {
    pub fn from_config(cfg: &ScanConfig, jobs: usize) -> Self {
        ScanOptions {
            jobs,
            verify: cfg.output.verify,
            grid_n: cfg.output.grid_n,
            photon_tolerance: cfg.output.photon_tolerance,
            g2_tolerance: cfg.output.g2_tolerance,
        }
    }
}

/// Logical cores, or 1 if unknown.
pub fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Scalars of the derived coupling written to every row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedColumns {
    pub zeta: f64,
    pub x_abs2: f64,
    pub chi_abs: f64,
    pub coop: Complex64,
    pub f: Complex64,
}

/// Kernel-quadrature values (Richardson-extrapolated) and relative deviations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleColumns {
    pub n_out_1: f64,
    pub n_out_2: f64,
    pub noise_floor: f64,
    pub g2_out_1: f64,
    pub g2_out_2: f64,
    pub dev_n_out_1: f64,
    pub dev_n_out_2: f64,
    pub dev_noise_floor: f64,
    pub dev_g2_out_1: f64,
    pub dev_g2_out_2: f64,
}

impl OracleColumns {
    pub fn max_photon_dev(&self) -> f64 {
        self.dev_n_out_1.max(self.dev_n_out_2).max(self.dev_noise_floor)
    }

    /// NaN deviations (g² undefined on both sides) count as agreement.
    pub fn max_g2_dev(&self) -> f64 {
        let d = |x: f64| if x.is_nan() { 0.0 } else { x };
        d(self.dev_g2_out_1).max(d(self.dev_g2_out_2))
    }

    pub fn passes(&self, photon_tol: f64, g2_tol: f64) -> bool {
        self.max_photon_dev() <= photon_tol && self.max_g2_dev() <= g2_tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub point: Point,
    pub derived: DerivedColumns,
    pub result: MemoryResult,
    pub oracle: Option<OracleColumns>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    pub message: String,
    pub exit_code: i32,
}

impl From<Error> for RowError {
    fn from(e: Error) -> Self {
        RowError {
            message: e.to_string(),
            exit_code: e.exit_code(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub index: usize,
    /// Position on each axis.
    pub axis_index: Vec<usize>,
    pub spec: PointSpec,
    pub outcome: std::result::Result<PointResult, RowError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub axes: Vec<(AxisPath, Vec<f64>)>,
    pub rows: Vec<ScanRow>,
    pub verified: bool,
}

impl ScanTable {
    pub fn errors(&self) -> impl Iterator<Item = (&ScanRow, &RowError)> {
        self.rows.iter().filter_map(|r| r.outcome.as_ref().err().map(|e| (r, e)))
    }
}

/// Relative deviation |a − b|/max(|a|, |b|); 0 when equal, NaN if either is NaN.
pub fn rel_dev(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn evaluate_point(spec: &PointSpec, verify: bool, grid_n: usize) -> Result<PointResult> {
    let point = spec.build()?;
    let dc = &point.model.dc;
    let mode = spec.mode.input_mode();
    let result = response::evaluate(&mode, spec.n_in_1, spec.g2_in, dc, grid_n)?;
    let derived = DerivedColumns {
        zeta: dc.zeta,
        x_abs2: dc.x.norm_sqr(),
        chi_abs: dc.chi.norm(),
        coop: dc.coop,
        f: dc.f,
    };
    let oracle = if verify {
        let k = kernel_photon_numbers(dc, &mode, spec.n_in_1, spec.g2_in, grid_n)?;
        let o = |r: crate::oracle::Richardson| r.extrapolated;
        Some(OracleColumns {
            n_out_1: o(k.n_out_1),
            n_out_2: o(k.n_out_2),
            noise_floor: o(k.noise_floor),
            g2_out_1: o(k.g2_out_1),
            g2_out_2: o(k.g2_out_2),
            dev_n_out_1: rel_dev(result.n_out_1, o(k.n_out_1)),
            dev_n_out_2: rel_dev(result.n_out_2, o(k.n_out_2)),
            dev_noise_floor: rel_dev(result.noise_floor, o(k.noise_floor)),
            dev_g2_out_1: rel_dev(result.g2_out_1, o(k.g2_out_1)),
            dev_g2_out_2: rel_dev(result.g2_out_2, o(k.g2_out_2)),
        })
    } else {
        None
    };
    Ok(PointResult {
        point,
        derived,
        result,
        oracle,
    })
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    if jobs == 0 {
        return Err(Error::Config("jobs must be >= 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Evaluate every point. Per-point failures land in the row; only config
/// problems abort.
pub fn run_scan(cfg: &ScanConfig, opts: &ScanOptions) -> Result<ScanTable> {
    if opts.verify && opts.grid_n < 100 {
        return Err(Error::Config("verification needs grid_n >= 100".into()));
    }
    if opts.grid_n < 2 {
        return Err(Error::Config("grid_n must be >= 2".into()));
    }
    let axes = cfg.axis_values()?;
    let points = cfg.points()?;
    let rows = pool(opts.jobs)?.install(|| {
        points
            .into_par_iter()
            .enumerate()
            .map(|(index, (axis_index, spec))| {
                let outcome = evaluate_point(&spec, opts.verify, opts.grid_n).map_err(RowError::from);
                ScanRow {
                    index,
                    axis_index,
                    spec,
                    outcome,
                }
            })
            .collect()
    });
    Ok(ScanTable {
        axes,
        rows,
        verified: opts.verify,
    })
}

/// Along the drive axis (energy, W or ζ), with every other axis fixed: the
/// noise floor must not fall, and η must not fall before its maximum.
/// Returns one message per violation; empty without a drive axis.
pub fn monotonic_violations(table: &ScanTable) -> Vec<String> {
    const SLACK: f64 = 1e-12;
    let Some(k) = table.axes.iter().position(|(p, _)| p.is_drive()) else {
        return Vec::new();
    };
    let drive = &table.axes[k].1;
    let mut order: Vec<usize> = (0..drive.len()).collect();
    order.sort_by(|&a, &b| drive[a].total_cmp(&drive[b]));

    let mut groups: std::collections::BTreeMap<Vec<usize>, Vec<&ScanRow>> = Default::default();
    for row in &table.rows {
        let mut key = row.axis_index.clone();
        key.remove(k);
        groups.entry(key).or_default().push(row);
    }
    let mut out = Vec::new();
    for rows in groups.values() {
        let series: Vec<(&ScanRow, &MemoryResult)> = order
            .iter()
            .filter_map(|&i| rows.iter().find(|r| r.axis_index[k] == i))
            .filter_map(|r| r.outcome.as_ref().ok().map(|p| (*r, &p.result)))
            .collect();
        let peak = series
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.eta_tot.total_cmp(&b.1 .1.eta_tot))
            .map_or(0, |(i, _)| i);
        for (i, w) in series.windows(2).enumerate() {
            let (ra, a) = w[0];
            let (rb, b) = w[1];
            if b.noise_floor < a.noise_floor * (1.0 - SLACK) {
                out.push(format!(
                    "noise_floor falls from {:e} (row {}) to {:e} (row {})",
                    a.noise_floor, ra.index, b.noise_floor, rb.index
                ));
            }
            if i < peak && b.eta_tot < a.eta_tot * (1.0 - SLACK) {
                out.push(format!(
                    "eta_tot falls before its maximum: {:e} (row {}) to {:e} (row {})",
                    a.eta_tot, ra.index, b.eta_tot, rb.index
                ));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitsRow {
    pub index: usize,
    pub spec: PointSpec,
    pub rules: std::result::Result<(DesignRules, f64), RowError>,
}

/// Design rules for each distinct cavity among the scan points (first
/// occurrence kept). The extra f64 is the cavity length.
pub fn limits_table(cfg: &ScanConfig) -> Result<Vec<LimitsRow>> {
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for (index, (_, spec)) in cfg.points()?.into_iter().enumerate() {
        let built = spec.physical().and_then(|p| Ok((p, spec.cavity()?)));
        let key = built.as_ref().ok().copied();
        if key.is_some() && seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let rules = built
            .and_then(|(p, c)| Ok((DesignRules::new(&p, &c, DEFAULT_A_MARGIN)?, c.length)))
            .map_err(RowError::from);
        out.push(LimitsRow { index, spec, rules });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(extra: &str) -> ScanConfig {
        ScanConfig::from_toml(&format!(
            "preset = \"cs\"\n[input]\nn_in_1 = 0.5\nmode = \"optimal\"\n{extra}"
        ))
        .unwrap()
    }

    fn opts(jobs: usize) -> ScanOptions {
        ScanOptions {
            jobs,
            verify: false,
            grid_n: 200,
            photon_tolerance: 1e-6,
            g2_tolerance: 1e-4,
        }
    }

    const ENERGY_AXIS: &str =
        "[[axis]]\npath = \"cavity.r\"\nvalues = [0.9, 0.95]\n[[axis]]\npath = \"control.energy\"\nlogspace = { start = 1e-14, stop = 1e-10, num = 9 }\n";

    #[test]
    fn order_is_independent_of_jobs() {
        let c = cfg(ENERGY_AXIS);
        let a = run_scan(&c, &opts(1)).unwrap();
        let b = run_scan(&c, &opts(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 18);
        assert!(a.rows.iter().enumerate().all(|(i, r)| r.index == i));
        assert_eq!(a.errors().count(), 0);
    }

    #[test]
    fn errors_stay_in_their_row() {
        let c = cfg("[[axis]]\npath = \"cavity.r\"\nvalues = [0.9, 1.5, 0.95]\n[control]\nzeta = 1.0\n");
        let t = run_scan(&c, &opts(1)).unwrap();
        assert!(t.rows[0].outcome.is_ok());
        let e = t.rows[1].outcome.as_ref().unwrap_err();
        assert!(e.message.contains("`r`"), "{}", e.message);
        assert_eq!(e.exit_code, 1);
        assert!(t.rows[2].outcome.is_ok());
    }

    #[test]
    fn optimal_mode_is_monotonic_in_energy() {
        let t = run_scan(&cfg(ENERGY_AXIS), &opts(1)).unwrap();
        assert!(monotonic_violations(&t).is_empty());
    }

    #[test]
    fn monotonic_check_catches_a_drop() {
        let mut t = run_scan(&cfg(ENERGY_AXIS), &opts(1)).unwrap();
        if let Ok(p) = &mut t.rows[3].outcome {
            p.result.noise_floor = 0.0;
        }
        let v = monotonic_violations(&t);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("noise_floor"));
    }

    #[test]
    fn verify_columns_agree() {
        let c = cfg("[[axis]]\npath = \"control.zeta\"\nvalues = [0.1, 1.0, 5.0]\n");
        let t = run_scan(&c, &ScanOptions { verify: true, ..opts(1) }).unwrap();
        for r in &t.rows {
            let o = r.outcome.as_ref().unwrap().oracle.unwrap();
            assert!(o.passes(1e-6, 1e-4), "{o:?}");
        }
    }

    #[test]
    fn limits_dedupes_cavities() {
        let rows = limits_table(&cfg(ENERGY_AXIS)).unwrap();
        assert_eq!(rows.len(), 2);
        let (r, _) = rows[1].rules.as_ref().unwrap();
        assert!((r.linewidth / std::f64::consts::TAU / 1e9 - 0.601).abs() < 2e-3);
    }

    #[test]
    fn rel_dev_edges() {
        assert_eq!(rel_dev(0.0, 0.0), 0.0);
        assert_eq!(rel_dev(1.0, 0.0), 1.0);
        assert!((rel_dev(1.0, 1.0 + 1e-9) - 1e-9).abs() < 1e-15);
        assert!(rel_dev(f64::NAN, 1.0).is_nan());
    }
}
