use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::deconstruct::Decomposition;
use crate::error::{Error, Result};

pub fn read_signal_csv(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let field = line.split(',').next().unwrap_or("").trim();
        if field.is_empty() || field.starts_with('#') {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => out.push(v),
            // tolerate a single header line
            Err(_) if out.is_empty() && line_no == 0 => continue,
            Err(_) => {
                return Err(Error::FileFormat(format!(
                    "{}:{}: `{field}` is not a number",
                    path.display(),
                    line_no + 1
                )))
            }
        }
    }
    Ok(out)
}

pub fn write_signal_csv(path: &Path, samples: &[f64]) -> Result<()> {
    let mut text = String::with_capacity(samples.len() * 20);
    for x in samples {
        writeln!(text, "{x}").unwrap();
    }
    fs::write(path, text)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub k: usize,
    pub module: f64,
    pub phase: f64,
}

/// `k,M,Theta` table of decomposition terms.
pub fn write_spectrum_csv(path: &Path, decomp: &Decomposition) -> Result<()> {
    let mut text = String::from("k,M,Theta\n");
    for t in &decomp.terms {
        writeln!(text, "{},{},{}", t.n, t.module, t.phase).unwrap();
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn read_spectrum_csv(path: &Path) -> Result<Vec<SpectrumRow>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("k,M,Theta") {
        return Err(Error::FileFormat("spectrum file must start with `k,M,Theta`".into()));
    }
    let mut rows: Vec<SpectrumRow> = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let bad = || Error::FileFormat(format!("spectrum row {}: `{line}`", i + 2));
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(bad());
        }
        let row = SpectrumRow {
            k: fields[0].parse().map_err(|_| bad())?,
            module: fields[1].parse().map_err(|_| bad())?,
            phase: fields[2].parse().map_err(|_| bad())?,
        };
        if rows.last().is_some_and(|r| r.k >= row.k) {
            return Err(Error::FileFormat("spectrum rows must have strictly increasing k".into()));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// `terms,residual` plot data of a residual trace.
pub fn write_trace_csv(path: &Path, trace: &[f64]) -> Result<()> {
    let mut text = String::from("terms,residual\n");
    for (j, r) in trace.iter().enumerate() {
        writeln!(text, "{j},{r}").unwrap();
    }
    fs::write(path, text)?;
    Ok(())
}
