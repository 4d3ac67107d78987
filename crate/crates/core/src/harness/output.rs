//! CSV and per-series plot-data writers.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so the
//! output is byte-stable for identical inputs and parses back exactly.
//! Empty cells mean the engine did not run (or failed) at that point.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::run::ResultRow;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 20] = [
    "series_value",
    "sweep_value",
    "mc_op_p",
    "mc_se_p",
    "mc_op_s",
    "mc_se_s",
    "mc_tau",
    "mc_ee",
    "an_op_p",
    "an_op_s",
    "an_converged",
    "an_tau",
    "an_ee",
    "rs_joint",
    "rho_joint",
    "af_joint",
    "rs_rho_only",
    "rs_af_only",
    "rs_fixed",
    "error",
];

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn record(r: &ResultRow) -> Vec<String> {
    vec![
        cell(r.series_value),
        r.sweep_value.to_string(),
        cell(r.mc_op_p),
        cell(r.mc_se_p),
        cell(r.mc_op_s),
        cell(r.mc_se_s),
        cell(r.mc_tau),
        cell(r.mc_ee),
        cell(r.an_op_p),
        cell(r.an_op_s),
        r.an_converged.map(|b| b.to_string()).unwrap_or_default(),
        cell(r.an_tau),
        cell(r.an_ee),
        cell(r.rs_joint),
        cell(r.rho_joint),
        cell(r.af_joint),
        cell(r.rs_rho_only),
        cell(r.rs_af_only),
        cell(r.rs_fixed),
        r.error.clone().unwrap_or_default(),
    ]
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(record(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    write_csv(rows, BufWriter::new(File::create(path)?))
}

fn parse_cell(field: &str, s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| Error::scenario(field, format!("not a number: `{s}`")))
}

/// Reads a file written by [`emit_csv`]. `wall_time` is not stored and
/// comes back as zero.
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::scenario("csv", "unexpected header"));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let f = |i: usize| parse_cell(CSV_HEADER[i], &rec[i]);
        let converged = match &rec[10] {
            "" => None,
            "true" => Some(true),
            "false" => Some(false),
            other => return Err(Error::scenario("an_converged", format!("not a flag: `{other}`"))),
        };
        rows.push(ResultRow {
            series_value: f(0)?,
            sweep_value: f(1)?.ok_or_else(|| Error::scenario("sweep_value", "missing"))?,
            mc_op_p: f(2)?,
            mc_se_p: f(3)?,
            mc_op_s: f(4)?,
            mc_se_s: f(5)?,
            mc_tau: f(6)?,
            mc_ee: f(7)?,
            an_op_p: f(8)?,
            an_op_s: f(9)?,
            an_converged: converged,
            an_tau: f(11)?,
            an_ee: f(12)?,
            rs_joint: f(13)?,
            rho_joint: f(14)?,
            af_joint: f(15)?,
            rs_rho_only: f(16)?,
            rs_af_only: f(17)?,
            rs_fixed: f(18)?,
            error: Some(rec[19].to_string()).filter(|s| !s.is_empty()),
            wall_time: 0.0,
        });
    }
    Ok(rows)
}

/// Writes one whitespace-separated `.dat` file per series into `dir`,
/// named `<stem>_<series>.dat` (or `<stem>.dat` without a series). Missing
/// values are written as `nan`.
pub fn emit_plotdata(rows: &[ResultRow], dir: impl AsRef<Path>, stem: &str) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mut files: Vec<(Option<f64>, Vec<&ResultRow>)> = Vec::new();
    for r in rows {
        match files.iter_mut().find(|(s, _)| *s == r.series_value) {
            Some((_, group)) => group.push(r),
            None => files.push((r.series_value, vec![r])),
        }
    }
    let mut paths = Vec::new();
    for (series, group) in files {
        let path = match series {
            Some(s) => dir.join(format!("{stem}_{s}.dat")),
            None => dir.join(format!("{stem}.dat")),
        };
        let mut out = BufWriter::new(File::create(&path)?);
        writeln!(out, "# {}", CSV_HEADER[1..19].join(" "))?;
        for r in group {
            let rec = record(r);
            let cols: Vec<&str> = rec[1..19]
                .iter()
                .map(|c| if c.is_empty() { "nan" } else { c.as_str() })
                .collect();
            writeln!(out, "{}", cols.join(" "))?;
        }
        out.flush()?;
        paths.push(path);
    }
    Ok(paths)
}
