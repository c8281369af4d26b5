//! CSV formats.
//!
//! | content       | header                      |
//! |---------------|-----------------------------|
//! | sample        | `k,z`                       |
//! | paired sample | `k,z1,z2`                   |
//! | paths (wide)  | `t,path_1,...,path_m`       |
//! | sweep         | `n,estimate,true_value`     |
//! | RMSE curve    | `n,rmse`                    |
//!
//! Comma separated, LF line endings, header mandatory. Raw data is written
//! with shortest round-trip formatting so a file read back reproduces the
//! exact `f64` values; derived figures use [`fmt_sig`].

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::{RmseRow, SweepResult};
use crate::model::{MarginalSample, PairedSample, TimePoint};
use crate::simulator::PathGrid;

/// Significant digits used for printed estimates.
pub const SIGNIFICANT_DIGITS: usize = 9;

/// `value` rounded to `digits` significant digits, printed without
/// trailing zeros (`3.663112062`, `-1.01773`, `4`). Magnitudes outside
/// `[1e-4, 1e15)` use exponent notation.
pub fn fmt_sig(value: f64, digits: usize) -> String {
    if !value.is_finite() || value == 0.0 {
        return format!("{value}");
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), value)
        .parse()
        .expect("scientific formatting parses");
    let magnitude = rounded.abs();
    if (1e-4..1e15).contains(&magnitude) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn fmt9(value: f64) -> String {
    fmt_sig(value, SIGNIFICANT_DIGITS)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn format_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    body(&mut out).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

pub fn write_sample_to(out: &mut dyn Write, sample: &MarginalSample) -> std::io::Result<()> {
    writeln!(out, "k,z")?;
    for (k, z) in sample.values().iter().enumerate() {
        writeln!(out, "{},{z}", k + 1)?;
    }
    Ok(())
}

pub fn write_sample(path: &Path, sample: &MarginalSample) -> Result<()> {
    write_file(path, |out| write_sample_to(out, sample))
}

pub fn write_paired_to(out: &mut dyn Write, sample: &PairedSample) -> std::io::Result<()> {
    writeln!(out, "k,z1,z2")?;
    for (k, (a, b)) in sample.pairs().iter().enumerate() {
        writeln!(out, "{},{a},{b}", k + 1)?;
    }
    Ok(())
}

pub fn write_paired(path: &Path, sample: &PairedSample) -> Result<()> {
    write_file(path, |out| write_paired_to(out, sample))
}

/// Wide format: one row per grid time, one column per path.
pub fn write_paths_to(out: &mut dyn Write, paths: &[PathGrid]) -> std::io::Result<()> {
    write!(out, "t")?;
    for k in 1..=paths.len() {
        write!(out, ",path_{k}")?;
    }
    writeln!(out)?;
    let Some(first) = paths.first() else {
        return Ok(());
    };
    for (i, t) in first.times.iter().enumerate() {
        write!(out, "{t}")?;
        for p in paths {
            write!(out, ",{}", p.values[i])?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_paths(path: &Path, paths: &[PathGrid]) -> Result<()> {
    write_file(path, |out| write_paths_to(out, paths))
}

/// Single path as `t,x`.
pub fn write_path(path: &Path, grid: &PathGrid) -> Result<()> {
    write_file(path, |out| {
        writeln!(out, "t,x")?;
        for (t, x) in grid.times.iter().zip(&grid.values) {
            writeln!(out, "{t},{x}")?;
        }
        Ok(())
    })
}

pub fn write_sweep_to(out: &mut dyn Write, sweep: &SweepResult) -> std::io::Result<()> {
    writeln!(out, "n,estimate,true_value")?;
    for row in &sweep.rows {
        writeln!(
            out,
            "{},{},{}",
            row.n,
            fmt9(row.estimate),
            fmt9(row.true_value)
        )?;
    }
    Ok(())
}

pub fn write_sweep(path: &Path, sweep: &SweepResult) -> Result<()> {
    write_file(path, |out| write_sweep_to(out, sweep))
}

pub fn write_rmse_to(out: &mut dyn Write, rows: &[RmseRow]) -> std::io::Result<()> {
    writeln!(out, "n,rmse")?;
    for row in rows {
        writeln!(out, "{},{}", row.n, fmt9(row.rmse))?;
    }
    Ok(())
}

pub fn write_rmse(path: &Path, rows: &[RmseRow]) -> Result<()> {
    write_file(path, |out| write_rmse_to(out, rows))
}

fn read_rows(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let found = reader
        .headers()
        .map_err(|e| format_err(path, e.to_string()))?
        .clone();
    if found.iter().collect::<Vec<_>>() != header {
        return Err(format_err(
            path,
            format!("expected header `{}`", header.join(",")),
        ));
    }
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format_err(path, e.to_string()))?;
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| {
                    format_err(path, format!("row {}: cannot parse `{field}`", line + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(format_err(path, "no data rows"));
    }
    Ok(rows)
}

/// Reads a `k,z` file; the observation time is not stored in the file.
pub fn read_sample(path: &Path, t: TimePoint) -> Result<MarginalSample> {
    let values = read_rows(path, &["k", "z"])?
        .into_iter()
        .map(|r| r[1])
        .collect();
    MarginalSample::new(t, values)
}

pub fn read_paired(path: &Path, t1: TimePoint, t2: TimePoint) -> Result<PairedSample> {
    let pairs = read_rows(path, &["k", "z1", "z2"])?
        .into_iter()
        .map(|r| (r[1], r[2]))
        .collect();
    PairedSample::new(t1, t2, pairs)
}
