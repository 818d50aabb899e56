use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cavity_lambda_sim::limits::{linewidth, DesignRules, DEFAULT_A_MARGIN};
use cavity_lambda_sim::scenario::config::DEFAULT_GRID_N;
use cavity_lambda_sim::scenario::report::{write_limits_csv, write_scan_csv};
use cavity_lambda_sim::scenario::scan::{default_jobs, limits_table, monotonic_violations};
use cavity_lambda_sim::scenario::{cs_preset, run_scan, ScanConfig, ScanOptions, ScanTable};
use cavity_lambda_sim::{Error, Result};

#[derive(Parser)]
#[command(name = "cavity-lambda-sim", version, about = "Four-wave-mixing noise in a cavity-enhanced Lambda memory")]
struct Cli {
    /// Output path (stdout if omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Quadrature grid for sampled modes and the kernel oracle.
    #[arg(long, global = true)]
    grid_n: Option<usize>,
    /// Worker threads for scans.
    #[arg(long, global = true, env = "CAVITY_LAMBDA_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every point of a scan config and write CSV.
    Scan {
        config: PathBuf,
        /// Append kernel-oracle columns and deviations.
        #[arg(long)]
        verify: bool,
    },
    /// Print a scan config for a named preset.
    Preset {
        #[command(subcommand)]
        name: PresetCmd,
    },
    /// Compare the closed forms with the kernel oracle at every scan point.
    Verify { config: PathBuf },
    /// Design-rule report for every distinct cavity in a config.
    Limits { config: PathBuf },
}

#[derive(Subcommand)]
enum PresetCmd {
    /// Caesium vapour, zero-order cavity.
    Cs {
        #[arg(long, default_value_t = 0.9)]
        r: f64,
        /// Roundtrip intensity loss.
        #[arg(long, default_value_t = 0.0)]
        loss: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Error::Config(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<u8> {
    let jobs = cli.jobs.unwrap_or_else(default_jobs);
    match cli.command {
        Command::Scan { config, verify } => {
            let cfg = ScanConfig::load(&config)?;
            let mut opts = ScanOptions::from_config(&cfg, jobs);
            opts.verify |= verify;
            if let Some(n) = cli.grid_n {
                opts.grid_n = n;
            }
            let table = run_scan(&cfg, &opts)?;
            let out = cli.out.or(cfg.output.csv.clone());
            write_scan_csv(sink(out.as_deref())?, &table)?;
            report_errors(&table);
            if cfg.output.monotonic_check {
                let v = monotonic_violations(&table);
                for m in &v {
                    eprintln!("monotonicity: {m}");
                }
                if !v.is_empty() {
                    return Ok(2);
                }
            }
            Ok(0)
        }
        Command::Verify { config } => {
            let cfg = ScanConfig::load(&config)?;
            let mut opts = ScanOptions::from_config(&cfg, jobs);
            opts.verify = true;
            if let Some(n) = cli.grid_n {
                opts.grid_n = n;
            }
            let table = run_scan(&cfg, &opts)?;
            if let Some(p) = &cli.out {
                write_scan_csv(sink(Some(p))?, &table)?;
            }
            Ok(verify_report(&table, &opts))
        }
        Command::Limits { config } => {
            let cfg = ScanConfig::load(&config)?;
            let rows = limits_table(&cfg)?;
            write_limits_csv(sink(cli.out.as_deref())?, &rows)?;
            Ok(0)
        }
        Command::Preset {
            name: PresetCmd::Cs { r, loss },
        } => {
            let text = cs_config(r, loss, cli.grid_n.unwrap_or(DEFAULT_GRID_N))?;
            let mut w = sink(cli.out.as_deref())?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
            Ok(0)
        }
    }
}

fn report_errors(table: &ScanTable) {
    let n = table.errors().count();
    if n > 0 {
        eprintln!("{n} of {} points failed; see the error column", table.rows.len());
    }
}

/// One line per point, then a summary. Exit 2 on any mismatch or numerical
/// failure, 1 if the worst failure is a bad parameter.
fn verify_report(table: &ScanTable, opts: &ScanOptions) -> u8 {
    let mut code = 0u8;
    let mut worst = (0.0f64, 0.0f64);
    for row in &table.rows {
        match &row.outcome {
            Ok(p) => {
                let o = p.oracle.expect("verify run has oracle columns");
                let ok = o.passes(opts.photon_tolerance, opts.g2_tolerance);
                worst = (worst.0.max(o.max_photon_dev()), worst.1.max(o.max_g2_dev()));
                println!(
                    "{} point {}: zeta={:.6e} photon dev={:.3e} g2 dev={:.3e}",
                    if ok { "PASS" } else { "FAIL" },
                    row.index,
                    p.derived.zeta,
                    o.max_photon_dev(),
                    o.max_g2_dev()
                );
                if !ok {
                    code = 2;
                }
            }
            Err(e) => {
                println!("FAIL point {}: {}", row.index, e.message);
                code = code.max(e.exit_code as u8);
            }
        }
    }
    println!(
        "{}: {} points, grid_n={}, max photon dev {:.3e} (tol {:e}), max g2 dev {:.3e} (tol {:e})",
        if code == 0 { "PASS" } else { "FAIL" },
        table.rows.len(),
        opts.grid_n,
        worst.0,
        opts.photon_tolerance,
        worst.1,
        opts.g2_tolerance
    );
    code
}

fn cs_config(r: f64, loss: f64, grid_n: usize) -> Result<String> {
    let p = cs_preset(r, loss)?;
    let rules = DesignRules::new(&p.phys, &p.cav, DEFAULT_A_MARGIN)?;
    let ghz = |x: f64| x / std::f64::consts::TAU / 1e9;
    let lw = linewidth(p.geometry.delta_fsr, p.signal_finesse());
    Ok(format!(
        "# Cs vapour, zero-order cavity\n\
         # L = {:.4} mm, FSR = {:.3} GHz, linewidth = {:.4} GHz, bandwidth limit = {:.4} GHz, r_opt = {:.4} ({:.4} with atomic absorption)\n\
         preset = \"cs\"\n\n\
         [cavity]\nr = {r:?}\nloss = {loss:?}\n\n\
         [input]\nn_in_1 = 0.5\ng2_in = 0.0\nmode = \"optimal\"\n\n\
         [[axis]]\npath = \"control.energy\"\nlogspace = {{ start = 1e-14, stop = 1e-10, num = 41 }}\n\n\
         [output]\ngrid_n = {grid_n}\n",
        p.geometry.length * 1e3,
        ghz(p.geometry.delta_fsr),
        ghz(lw),
        ghz(rules.bandwidth_limit),
        rules.r_opt,
        rules.r_opt_loaded,
    ))
}
