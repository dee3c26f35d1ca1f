//! Benchmark harness for the range-analysis domains: program generators,
//! batch runners, Monte-Carlo soundness oracles, and table/plot emission.
//!
//! The three stock cases are an arctan kernel analyzed over a branch
//! cascade, a square-root expression re-analyzed over partitions of its
//! input range, and a depth-unrolled Householder inverse-square-root
//! iteration. [`run_all`] produces one [`BenchRow`] per case, domain,
//! concretization, parameter, and program variable; [`emit`] renders the
//! rows as CSV, a Markdown table, or plot-ready series.

pub mod emit;
pub mod gen;
pub mod mc;
pub mod run;

pub use emit::{emit, emit_plotdata_dir, parse_csv, render, CsvError, OutputFormat};
pub use gen::{gen_arctan, gen_householder, gen_stolfi_cell};
pub use mc::{mc_hull, mc_soundness, mc_soundness_multi};
pub use run::{
    run_all, run_arctan, run_householder, run_stolfi, run_stolfi_series, BenchConfig, BenchOutput,
};

use qz_domain::{Backend, Concretization};
use thiserror::Error;

/// Default RNG seed for every sampling oracle, for reproducible runs.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// One measurement: the bounds of one program variable from one analysis
/// run. `param` is the case's knob (unroll depth or partition count) and
/// `width = hi − lo` is never negative. `ms` records wall time for the
/// whole run the row came from; it is informational only.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub case: String,
    pub domain: Backend,
    pub conc: Concretization,
    pub param: u32,
    pub var: String,
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
    pub ms: f64,
}

/// Failures a benchmark run can surface.
#[derive(Debug, Error)]
pub enum BenchError {
    /// A generated program failed to analyze; generators are supposed to
    /// emit well-formed sources, so this indicates a bug.
    #[error(transparent)]
    Analysis(#[from] qz_analyzer::AnalyzerError),
    /// Writing an output file failed.
    #[error("cannot write results: {0}")]
    Io(#[from] std::io::Error),
    /// A caller-supplied knob is out of range.
    #[error("invalid benchmark parameter: {0}")]
    Parameter(String),
}
