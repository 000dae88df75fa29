//! CSV tables of doubles: one header row, `{:.16e}` cells, LF line endings.

use crate::error::{Error, Result};
use crate::potential::{Interpolation, PotentialSpec};
use crate::types::{EigenSpectrum, Level};
use std::io::{BufRead, Write};
use std::path::Path;

/// Formats one value with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `header` and `rows` as CSV.
pub fn write_table<W: Write>(mut out: W, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    if let Some(r) = rows.iter().find(|r| r.len() != header.len()) {
        return Err(Error::InvalidParameter(format!(
            "row of {} cells under a {}-column header",
            r.len(),
            header.len()
        )));
    }
    let mut buf = String::new();
    buf.push_str(&header.join(","));
    buf.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        buf.push_str(&cells.join(","));
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn write_table_file(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let f =
        std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    write_table(std::io::BufWriter::new(f), header, rows)
}

/// Reads a CSV table of numbers; returns the header and the rows.
pub fn read_table<R: BufRead>(input: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = input.lines();
    let header: Vec<String> = match lines.next() {
        Some(l) => l?
            .trim_end_matches('\r')
            .split(',')
            .map(|s| s.trim().to_string())
            .collect(),
        None => return Err(Error::Parse("empty CSV".into())),
    };
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|s| s.trim().parse::<f64>()).collect();
        let row = row.map_err(|e| Error::Parse(format!("line {}: {e}", i + 2)))?;
        if row.len() != header.len() {
            return Err(Error::Parse(format!(
                "line {}: {} cells, expected {}",
                i + 2,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

pub fn read_table_file(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let f = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_table(std::io::BufReader::new(f))
}

/// Sampled potential from the first two columns (r, q) of a CSV file.
pub fn read_potential(path: &Path, interpolation: Interpolation) -> Result<PotentialSpec> {
    let (header, rows) = read_table_file(path)?;
    if header.len() < 2 {
        return Err(Error::Parse(format!(
            "{}: need columns r,q",
            path.display()
        )));
    }
    let (r, q) = rows.iter().map(|row| (row[0], row[1])).unzip();
    PotentialSpec::sampled(r, q, interpolation)
}

pub fn spectrum_rows(spectrum: &EigenSpectrum) -> Vec<Vec<f64>> {
    spectrum
        .levels
        .iter()
        .map(|l| vec![l.n as f64, l.z, l.residual])
        .collect()
}

pub const SPECTRUM_HEADER: [&str; 3] = ["n", "z", "residual"];

pub fn spectrum_from_rows(rows: &[Vec<f64>]) -> Result<EigenSpectrum> {
    let levels = rows
        .iter()
        .map(|r| {
            if r.len() != 3 || r[0].fract() != 0.0 {
                return Err(Error::Parse(
                    "spectrum rows are n,z,residual with integer n".into(),
                ));
            }
            Ok(Level {
                n: r[0] as i64,
                z: r[1],
                residual: r[2],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenSpectrum { levels })
}
