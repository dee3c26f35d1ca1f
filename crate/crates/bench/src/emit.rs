//! Result emission: CSV, Markdown tables, and plot-ready series.
//!
//! Fields are plain identifiers and numbers, so the CSV needs no quoting;
//! binary64 values print in Rust's shortest round-trip form and parse
//! back bit-identically (infinities as `inf`/`-inf`).

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qz_domain::{Backend, Concretization};
use std::collections::BTreeMap;
use thiserror::Error;

use crate::{BenchError, BenchRow};

pub const CSV_HEADER: &str = "case,domain,conc,param,var,lo,hi,width,ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Md,
    Plotdata,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "md" => Ok(OutputFormat::Md),
            "plotdata" => Ok(OutputFormat::Plotdata),
            other => Err(format!("unknown output format `{other}`")),
        }
    }
}

/// Renders rows in the requested format.
pub fn render(rows: &[BenchRow], fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Csv => render_csv(rows),
        OutputFormat::Md => render_md(rows),
        OutputFormat::Plotdata => render_plotdata(rows),
    }
}

/// Renders and writes to `path` in one step.
pub fn emit(rows: &[BenchRow], fmt: OutputFormat, path: &Path) -> Result<(), BenchError> {
    fs::write(path, render(rows, fmt))?;
    Ok(())
}

fn render_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.case, r.domain, r.conc, r.param, r.var, r.lo, r.hi, r.width, r.ms
        ));
    }
    s
}

fn render_md(rows: &[BenchRow]) -> String {
    let mut s = String::from(
        "| case | domain | conc | param | var | lo | hi | width | ms |\n\
         |---|---|---|---|---|---|---|---|---|\n",
    );
    for r in rows {
        s.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
            r.case, r.domain, r.conc, r.param, r.var, r.lo, r.hi, r.width, r.ms
        ));
    }
    s
}

/// One whitespace-separated `param width` series per (case, var, domain,
/// conc) group, each headed by a `#` comment line and separated by blank
/// lines — ready for gnuplot's `index`.
fn render_plotdata(rows: &[BenchRow]) -> String {
    let mut groups: BTreeMap<(String, String, String, String), Vec<(u32, f64)>> = BTreeMap::new();
    for r in rows {
        groups
            .entry((
                r.case.clone(),
                r.var.clone(),
                r.domain.to_string(),
                r.conc.to_string(),
            ))
            .or_default()
            .push((r.param, r.width));
    }
    let mut s = String::new();
    for ((case, var, domain, conc), mut pts) in groups {
        pts.sort_by_key(|&(p, _)| p);
        s.push_str(&format!("# {case} {var} {domain} {conc}\n"));
        for (p, w) in pts {
            s.push_str(&format!("{p} {w}\n"));
        }
        s.push('\n');
    }
    s
}

/// Writes one plotdata file per case into `dir` (created if missing);
/// returns the written paths.
pub fn emit_plotdata_dir(rows: &[BenchRow], dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    fs::create_dir_all(dir)?;
    let mut by_case: BTreeMap<&str, Vec<BenchRow>> = BTreeMap::new();
    for r in rows {
        by_case.entry(&r.case).or_default().push(r.clone());
    }
    let mut paths = Vec::new();
    for (case, case_rows) in by_case {
        let path = dir.join(format!("{case}.dat"));
        fs::write(&path, render_plotdata(&case_rows))?;
        paths.push(path);
    }
    Ok(paths)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CsvError {
    #[error("line 1: expected header `case,domain,conc,param,var,lo,hi,width,ms`")]
    Header,
    #[error("line {line}: expected 9 comma-separated fields")]
    FieldCount { line: usize },
    #[error("line {line}: malformed value `{field}`")]
    Field { line: usize, field: String },
}

fn parse_backend(s: &str) -> Option<Backend> {
    match s {
        "interval" => Some(Backend::Interval),
        "affine" => Some(Backend::Affine),
        "quad" => Some(Backend::Quad),
        _ => None,
    }
}

fn parse_conc(s: &str) -> Option<Concretization> {
    match s {
        "mt" => Some(Concretization::Mt),
        "sdp" => Some(Concretization::Sdp),
        _ => None,
    }
}

/// Parses text produced by the CSV renderer back into rows.
pub fn parse_csv(text: &str) -> Result<Vec<BenchRow>, CsvError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == CSV_HEADER => {}
        _ => return Err(CsvError::Header),
    }
    let mut rows = Vec::new();
    for (i, raw) in lines {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = raw.trim_end().split(',').collect();
        if f.len() != 9 {
            return Err(CsvError::FieldCount { line });
        }
        let bad = |field: &str| CsvError::Field {
            line,
            field: field.to_string(),
        };
        rows.push(BenchRow {
            case: f[0].to_string(),
            domain: parse_backend(f[1]).ok_or_else(|| bad(f[1]))?,
            conc: parse_conc(f[2]).ok_or_else(|| bad(f[2]))?,
            param: f[3].parse().map_err(|_| bad(f[3]))?,
            var: f[4].to_string(),
            lo: f[5].parse().map_err(|_| bad(f[5]))?,
            hi: f[6].parse().map_err(|_| bad(f[6]))?,
            width: f[7].parse().map_err(|_| bad(f[7]))?,
            ms: f[8].parse().map_err(|_| bad(f[8]))?,
        });
    }
    Ok(rows)
}
