//! Batch benchmark runners.
//!
//! Each runner analyzes generated sources across the configured domains
//! and concretizations and flattens the per-variable bounds into
//! [`BenchRow`]s. Jobs are independent (every analysis owns its symbol
//! registry), so they run on the rayon pool; rows are aggregated in a
//! fixed (case, domain, conc, param, var) order regardless of scheduling.

use std::time::Instant;

use qz_analyzer::{analyze, AnalysisConfig, AnalysisResult};
use qz_domain::{Backend, Concretization};
use qz_forms::ExtInterval;
use rayon::prelude::*;

use crate::gen::{gen_arctan, gen_householder, gen_stolfi_cell};
use crate::{BenchError, BenchRow};

/// Which analyses to run and on what inputs. Input ranges are recorded in
/// the run's notes so emitted tables carry their provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub domains: Vec<Backend>,
    pub concs: Vec<Concretization>,
    /// Input range of the arctan case; the branch cascade is studied on
    /// x ∈ [1, 10] by default (a choice, the case itself fixes none).
    pub arctan_input: (f64, f64),
    /// Input range of the partitioned square-root case.
    pub stolfi_input: (f64, f64),
    /// Range of the Householder coefficient A.
    pub householder_a: (f64, f64),
    /// Partition counts for the square-root case ([`run_all`]).
    pub partitions: Vec<u32>,
    /// Unroll depths for the Householder case ([`run_all`]).
    pub depths: Vec<u32>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            domains: vec![Backend::Interval, Backend::Affine, Backend::Quad],
            concs: vec![Concretization::Mt, Concretization::Sdp],
            arctan_input: (1.0, 10.0),
            stolfi_input: (-2.0, 2.0),
            householder_a: (16.0, 20.0),
            partitions: (1..=14).collect(),
            depths: (0..=8).collect(),
        }
    }
}

/// Rows plus human-readable notes (inputs used, excluded cells, analyzer
/// warnings) that belong next to any emitted table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchOutput {
    pub rows: Vec<BenchRow>,
    pub notes: Vec<String>,
}

impl BenchOutput {
    fn absorb(&mut self, other: BenchOutput) {
        self.rows.extend(other.rows);
        for n in other.notes {
            if !self.notes.contains(&n) {
                self.notes.push(n);
            }
        }
    }

    fn sort_rows(&mut self) {
        self.rows.sort_by(|a, b| {
            let ka = (
                &a.case,
                a.domain.to_string(),
                a.conc.to_string(),
                a.param,
                &a.var,
            );
            let kb = (
                &b.case,
                b.domain.to_string(),
                b.conc.to_string(),
                b.param,
                &b.var,
            );
            ka.cmp(&kb)
        });
    }
}

/// The (domain, concretization) pairs a config asks for; SDP applies only
/// to the quad domain, so other combinations are dropped rather than
/// rejected.
fn jobs(cfg: &BenchConfig) -> Vec<(Backend, Concretization)> {
    let mut out = Vec::new();
    for &d in &cfg.domains {
        for &c in &cfg.concs {
            if c == Concretization::Sdp && d != Backend::Quad {
                continue;
            }
            out.push((d, c));
        }
    }
    out
}

fn analysis_config(domain: Backend, conc: Concretization) -> AnalysisConfig {
    AnalysisConfig {
        domain,
        conc,
        ..Default::default()
    }
}

/// Flattens one analysis into rows; analyzer warnings become notes tagged
/// with the row key so they survive aggregation.
fn rows_from_result(
    case: &str,
    domain: Backend,
    conc: Concretization,
    param: u32,
    result: &AnalysisResult,
    ms: f64,
) -> BenchOutput {
    let mut out = BenchOutput::default();
    for (name, iv) in &result.vars {
        let iv = iv.unwrap_or_else(ExtInterval::whole);
        out.rows.push(BenchRow {
            case: case.to_string(),
            domain,
            conc,
            param,
            var: name.clone(),
            lo: iv.lo(),
            hi: iv.hi(),
            width: iv.hi() - iv.lo(),
            ms,
        });
    }
    for w in &result.warnings {
        out.notes
            .push(format!("{case} p={param} {domain}/{conc}: {w}"));
    }
    out
}

/// Analyzes the arctan cascade once per (domain, concretization).
pub fn run_arctan(cfg: &BenchConfig) -> Result<BenchOutput, BenchError> {
    let (lo, hi) = cfg.arctan_input;
    let src = gen_arctan(cfg.arctan_input);
    let mut out = BenchOutput::default();
    out.notes.push(format!("arctan: input x in [{lo}, {hi}]"));
    let per: Vec<BenchOutput> = jobs(cfg)
        .into_par_iter()
        .map(|(d, c)| {
            let t = Instant::now();
            let r = analyze(&src, &analysis_config(d, c))?;
            let ms = t.elapsed().as_secs_f64() * 1e3;
            Ok::<_, BenchError>(rows_from_result("arctan", d, c, 0, &r, ms))
        })
        .collect::<Result<_, _>>()?;
    for p in per {
        out.absorb(p);
    }
    out.sort_rows();
    Ok(out)
}

/// A cell with this warning has an abstract √ argument that is entirely
/// negative, which proves the cell contains no defined execution at all;
/// only such cells may soundly be left out of the joined hull.
fn cell_has_no_defined_runs(r: &AnalysisResult) -> bool {
    r.warnings
        .iter()
        .any(|w| w.contains("sqrt argument range is entirely negative"))
}

/// Splits `input` into `n` equal cells whose union covers it exactly.
fn split_cells(input: (f64, f64), n: u32) -> Vec<(f64, f64)> {
    let (lo, hi) = input;
    let mut pts: Vec<f64> = (0..=n)
        .map(|i| lo + (hi - lo) * f64::from(i) / f64::from(n))
        .collect();
    pts[0] = lo;
    pts[n as usize] = hi;
    for i in 1..pts.len() {
        pts[i] = pts[i].max(pts[i - 1]);
    }
    pts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Analyzes the square-root expression cell by cell on a `partitions`-way
/// split of the input range and joins the per-cell bounds. One row per
/// (domain, concretization, variable).
pub fn run_stolfi(partitions: u32, cfg: &BenchConfig) -> Result<BenchOutput, BenchError> {
    if partitions == 0 {
        return Err(BenchError::Parameter(
            "partition count must be at least 1".into(),
        ));
    }
    let (lo, hi) = cfg.stolfi_input;
    let cells = split_cells(cfg.stolfi_input, partitions);
    let mut out = BenchOutput::default();
    out.notes.push(format!("stolfi: input x in [{lo}, {hi}]"));
    let per: Vec<BenchOutput> = jobs(cfg)
        .into_par_iter()
        .map(|(d, c)| {
            let acfg = analysis_config(d, c);
            let t = Instant::now();
            let mut hull: Vec<(String, Option<ExtInterval>)> = Vec::new();
            let mut excluded = 0u32;
            for &cell in &cells {
                let r = analyze(&gen_stolfi_cell(cell), &acfg)?;
                if cell_has_no_defined_runs(&r) {
                    excluded += 1;
                    continue;
                }
                for (name, iv) in &r.vars {
                    let iv = iv.unwrap_or_else(ExtInterval::whole);
                    match hull.iter_mut().find(|(n, _)| n == name) {
                        Some((_, acc)) => {
                            *acc = Some(acc.map_or(iv, |a| a.hull(&iv)));
                        }
                        None => hull.push((name.clone(), Some(iv))),
                    }
                }
            }
            let ms = t.elapsed().as_secs_f64() * 1e3;
            let mut part = BenchOutput::default();
            if excluded > 0 {
                part.notes.push(format!(
                    "stolfi p={partitions} {d}/{c}: {excluded} of {partitions} cells have no \
                     defined executions (sqrt of a negative range) and are left out of the hull"
                ));
            }
            for (name, iv) in hull {
                let iv = iv.unwrap_or_else(ExtInterval::whole);
                part.rows.push(BenchRow {
                    case: "stolfi".to_string(),
                    domain: d,
                    conc: c,
                    param: partitions,
                    var: name,
                    lo: iv.lo(),
                    hi: iv.hi(),
                    width: iv.hi() - iv.lo(),
                    ms,
                });
            }
            Ok::<_, BenchError>(part)
        })
        .collect::<Result<_, _>>()?;
    for p in per {
        out.absorb(p);
    }
    out.sort_rows();
    Ok(out)
}

/// Runs [`run_stolfi`] for every partition count in `cfg.partitions` and
/// merges the results.
pub fn run_stolfi_series(cfg: &BenchConfig) -> Result<BenchOutput, BenchError> {
    let parts: Vec<BenchOutput> = cfg
        .partitions
        .par_iter()
        .map(|&p| run_stolfi(p, cfg))
        .collect::<Result<_, _>>()?;
    let mut out = BenchOutput::default();
    for part in parts {
        out.absorb(part);
    }
    out.sort_rows();
    Ok(out)
}

/// Analyzes the Householder iteration unrolled to each requested depth.
/// The width column of the `x` rows is the iterate's global error (max
/// minus min over the coefficient range).
pub fn run_householder(
    depths: &[u32],
    a: (f64, f64),
    cfg: &BenchConfig,
) -> Result<BenchOutput, BenchError> {
    if depths.is_empty() {
        return Err(BenchError::Parameter(
            "at least one unroll depth is required".into(),
        ));
    }
    let (lo, hi) = a;
    let mut out = BenchOutput::default();
    out.notes
        .push(format!("householder: coefficient A in [{lo}, {hi}]"));
    let units: Vec<(Backend, Concretization, u32)> = jobs(cfg)
        .into_iter()
        .flat_map(|(d, c)| depths.iter().map(move |&k| (d, c, k)))
        .collect();
    let per: Vec<BenchOutput> = units
        .into_par_iter()
        .map(|(d, c, depth)| {
            let t = Instant::now();
            let r = analyze(&gen_householder(depth, a), &analysis_config(d, c))?;
            let ms = t.elapsed().as_secs_f64() * 1e3;
            Ok::<_, BenchError>(rows_from_result("householder", d, c, depth, &r, ms))
        })
        .collect::<Result<_, _>>()?;
    for p in per {
        out.absorb(p);
    }
    out.sort_rows();
    Ok(out)
}

/// Runs every stock case: arctan once, the square-root case at each
/// configured partition count, and Householder at each configured depth.
pub fn run_all(cfg: &BenchConfig) -> Result<BenchOutput, BenchError> {
    let (arctan, (stolfi, householder)) = rayon::join(
        || run_arctan(cfg),
        || {
            rayon::join(
                || run_stolfi_series(cfg),
                || run_householder(&cfg.depths, cfg.householder_a, cfg),
            )
        },
    );
    let mut out = BenchOutput::default();
    out.absorb(arctan?);
    out.absorb(stolfi?);
    out.absorb(householder?);
    out.sort_rows();
    Ok(out)
}
