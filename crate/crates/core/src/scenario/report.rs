//! CSV emission. Floats are written as `{:.16e}` (17 significant digits), so
//! identical scans give byte-identical files.

use std::io::Write;

use crate::error::{Error, Result};

use super::config::Drive;
use super::scan::{LimitsRow, ScanRow, ScanTable};

pub const SCHEMA: u32 = 1;

pub fn header_comment() -> String {
    format!("# cavity-lambda-sim v{} schema={SCHEMA}", env!("CARGO_PKG_VERSION"))
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

const ECHO: &[&str] = &[
    "index",
    "gamma_hz",
    "delta_hz",
    "delta_s_hz",
    "delta_a_hz",
    "d",
    "lambda",
    "ks_l",
    "ka_l",
    "r",
    "loss",
    "length",
    "atomic_phase",
    "energy",
    "w",
    "n_in_1",
    "g2_in",
    "mode",
];

const DERIVED: &[&str] = &["zeta", "x_abs2", "chi_abs", "coop_re", "coop_im", "f_re", "f_im"];

const RESULT: &[&str] = &[
    "n_out_1",
    "n_out_2",
    "noise_floor",
    "eta_store",
    "eta_ret",
    "eta_tot",
    "snr",
    "g2_out_1",
    "g2_out_2",
    "kappa_re",
    "kappa_im",
];

const ORACLE: &[&str] = &[
    "oracle_n_out_1",
    "oracle_n_out_2",
    "oracle_noise_floor",
    "oracle_g2_out_1",
    "oracle_g2_out_2",
    "dev_n_out_1",
    "dev_n_out_2",
    "dev_noise_floor",
    "dev_g2_out_1",
    "dev_g2_out_2",
];

pub fn scan_columns(verified: bool) -> Vec<&'static str> {
    let mut c: Vec<&str> = ECHO.iter().chain(DERIVED).chain(RESULT).copied().collect();
    if verified {
        c.extend_from_slice(ORACLE);
    }
    c.push("error");
    c
}

fn scan_record(row: &ScanRow, verified: bool) -> Vec<String> {
    let s = &row.spec;
    let ok = row.outcome.as_ref().ok();
    let (energy, w) = match (ok, s.drive) {
        (Some(p), _) => (p.point.energy, Some(p.point.model.control.w)),
        (None, Drive::Energy(e)) => (Some(e), None),
        (None, Drive::W(w)) => (None, Some(w)),
        (None, Drive::Zeta(_)) => (None, None),
    };
    let mut rec = vec![
        row.index.to_string(),
        fmt_f64(s.gamma_hz),
        fmt_f64(s.delta_hz),
        fmt_f64(s.delta_s_hz),
        opt(ok.map(|p| p.point.delta_a_hz).or(s.delta_a_hz)),
        fmt_f64(s.d),
        fmt_f64(s.lambda),
        fmt_f64(s.ks_l),
        fmt_f64(s.ka_l),
        fmt_f64(s.r),
        fmt_f64(s.loss),
        opt(ok.map(|p| p.point.length).or(s.length)),
        format!("{:?}", s.atomic_phase).to_lowercase(),
        opt(energy),
        opt(w),
        fmt_f64(s.n_in_1),
        fmt_f64(s.g2_in),
        s.mode.as_str().to_string(),
    ];
    let n_tail = DERIVED.len() + RESULT.len() + if verified { ORACLE.len() } else { 0 };
    match &row.outcome {
        Ok(p) => {
            let d = &p.derived;
            let m = &p.result;
            rec.extend(
                [
                    d.zeta,
                    d.x_abs2,
                    d.chi_abs,
                    d.coop.re,
                    d.coop.im,
                    d.f.re,
                    d.f.im,
                    m.n_out_1,
                    m.n_out_2,
                    m.noise_floor,
                    m.eta_store,
                    m.eta_ret,
                    m.eta_tot,
                    m.snr,
                    m.g2_out_1,
                    m.g2_out_2,
                    m.kappa_overlap.re,
                    m.kappa_overlap.im,
                ]
                .map(fmt_f64),
            );
            if verified {
                match &p.oracle {
                    Some(o) => rec.extend(
                        [
                            o.n_out_1,
                            o.n_out_2,
                            o.noise_floor,
                            o.g2_out_1,
                            o.g2_out_2,
                            o.dev_n_out_1,
                            o.dev_n_out_2,
                            o.dev_noise_floor,
                            o.dev_g2_out_1,
                            o.dev_g2_out_2,
                        ]
                        .map(fmt_f64),
                    ),
                    None => rec.extend(std::iter::repeat_n(String::new(), ORACLE.len())),
                }
            }
            rec.push(String::new());
        }
        Err(e) => {
            rec.extend(std::iter::repeat_n(String::new(), n_tail));
            rec.push(e.message.clone());
        }
    }
    rec
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

fn write_table<W: Write>(mut out: W, columns: &[&str], records: impl Iterator<Item = Vec<String>>) -> Result<()> {
    writeln!(out, "{}", header_comment())?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(columns).map_err(csv_err)?;
    for r in records {
        w.write_record(&r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_scan_csv<W: Write>(out: W, table: &ScanTable) -> Result<()> {
    let cols = scan_columns(table.verified);
    write_table(out, &cols, table.rows.iter().map(|r| scan_record(r, table.verified)))
}

pub const LIMITS_COLUMNS: &[&str] = &[
    "index",
    "r",
    "loss",
    "length",
    "d",
    "delta_s_hz",
    "delta_fsr_hz",
    "finesse_s",
    "finesse_omega",
    "linewidth_hz",
    "bandwidth_limit_hz",
    "a_margin",
    "theta",
    "r_opt",
    "chi_opt_half",
    "theta_loaded",
    "r_opt_loaded",
    "c_bb",
    "gamma_cbb_re_hz",
    "gamma_cbb_im_hz",
    "control_enhancement",
    "error",
];

fn limits_record(row: &LimitsRow) -> Vec<String> {
    let s = &row.spec;
    let mut rec = vec![row.index.to_string(), fmt_f64(s.r), fmt_f64(s.loss)];
    let hz = |x: f64| fmt_f64(x / std::f64::consts::TAU);
    match &row.rules {
        Ok((d, length)) => {
            rec.extend([
                fmt_f64(*length),
                fmt_f64(s.d),
                fmt_f64(s.delta_s_hz),
                hz(d.delta_fsr),
                fmt_f64(d.finesse_s),
                fmt_f64(d.finesse_omega),
                hz(d.linewidth),
                hz(d.bandwidth_limit),
                fmt_f64(d.a_margin),
                fmt_f64(d.theta),
                fmt_f64(d.r_opt),
                fmt_f64(d.chi_opt_half),
                fmt_f64(d.theta_loaded),
                fmt_f64(d.r_opt_loaded),
                fmt_f64(d.c_bb),
                hz(d.gamma_cbb.re),
                hz(d.gamma_cbb.im),
                fmt_f64(d.control_enhancement),
                String::new(),
            ]);
        }
        Err(e) => {
            rec.extend([opt(s.length), fmt_f64(s.d), fmt_f64(s.delta_s_hz)]);
            rec.extend(std::iter::repeat_n(String::new(), LIMITS_COLUMNS.len() - rec.len() - 1));
            rec.push(e.message.clone());
        }
    }
    rec
}

pub fn write_limits_csv<W: Write>(out: W, rows: &[LimitsRow]) -> Result<()> {
    write_table(out, LIMITS_COLUMNS, rows.iter().map(limits_record))
}
