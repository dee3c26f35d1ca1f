//! Command-line front end.
//!
//! Three subcommands: `bounds` evaluates one quadratic form under a chosen
//! range oracle, `analyze` runs the abstract interpreter on a program file,
//! and `bench` drives the benchmark suite. Exit codes: 0 success, 1 parse
//! error, 2 configuration error, 3 internal error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qz_analyzer::{analyze, report, AnalysisConfig, Format};
use qz_bench::{
    emit, emit_plotdata_dir, mc_soundness_multi, render, run_all, run_arctan, run_householder,
    run_stolfi_series, BenchConfig, BenchError, BenchOutput, OutputFormat, DEFAULT_SEED,
};
use qz_domain::{Backend, Concretization};
use qz_forms::parse_form;
use qz_sdp::{gamma_sdp, grid_range};

#[derive(Parser)]
#[command(name = "qz", version, about = "Sound range analysis for small numeric programs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print certified bounds for a single quadratic form
    Bounds(BoundsArgs),
    /// Analyze a program file and print per-variable bounds
    Analyze(AnalyzeArgs),
    /// Run benchmark cases and emit result tables
    Bench(BenchArgs),
}

#[derive(Args)]
struct BoundsArgs {
    /// Form text, e.g. "0.5 + e1 - e2 - e1*e1 + 0.25*ep"
    #[arg(long)]
    form: String,
    /// Range oracle to evaluate the form with
    #[arg(long, value_enum, default_value_t = Method::Mt)]
    method: Method,
    /// Grid points per axis (grid method only; dense grids are capped and
    /// fall back to sampling for forms with many symbols)
    #[arg(long, default_value_t = 1001)]
    resolution: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Coefficient-sum range (fast, conservative)
    Mt,
    /// Certified semidefinite upper/lower bounds
    Sdp,
    /// Inner approximation by grid evaluation (not sound, for comparison)
    Grid,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Program file to analyze
    file: PathBuf,
    /// Abstract domain
    #[arg(long, value_enum, default_value_t = DomainOpt::Quad)]
    domain: DomainOpt,
    /// Concretization used at joins, guards, and reporting
    #[arg(long, value_enum, default_value_t = ConcOpt::Mt)]
    conc: ConcOpt,
    /// Model binary64 rounding of every program operation
    #[arg(long)]
    fp: bool,
    /// Loop unrolling bound
    #[arg(long, default_value_t = AnalysisConfig::default().unroll_bound)]
    unroll: u32,
    /// Report format
    #[arg(long, value_enum, default_value_t = FormatOpt::Text)]
    format: FormatOpt,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DomainOpt {
    Interval,
    Affine,
    Quad,
}

impl From<DomainOpt> for Backend {
    fn from(d: DomainOpt) -> Backend {
        match d {
            DomainOpt::Interval => Backend::Interval,
            DomainOpt::Affine => Backend::Affine,
            DomainOpt::Quad => Backend::Quad,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConcOpt {
    Mt,
    Sdp,
}

impl From<ConcOpt> for Concretization {
    fn from(c: ConcOpt) -> Concretization {
        match c {
            ConcOpt::Mt => Concretization::Mt,
            ConcOpt::Sdp => Concretization::Sdp,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatOpt {
    Text,
    Json,
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark case to run
    #[arg(value_enum)]
    case: Case,
    /// Domains to benchmark
    #[arg(long, value_delimiter = ',', default_values_t = [DomainOpt::Interval, DomainOpt::Affine, DomainOpt::Quad])]
    domains: Vec<DomainOpt>,
    /// Concretizations to benchmark
    #[arg(long, value_delimiter = ',', default_values_t = [ConcOpt::Mt, ConcOpt::Sdp])]
    conc: Vec<ConcOpt>,
    /// Write rows as CSV to this file
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write rows as a Markdown table to this file
    #[arg(long)]
    md: Option<PathBuf>,
    /// Write per-(case, domain, conc) plot data files into this directory
    #[arg(long)]
    plotdata: Option<PathBuf>,
    /// Override the selected case's input range (single case only)
    #[arg(long, value_parser = parse_range)]
    input: Option<(f64, f64)>,
    /// Largest partition count for the square-root case (runs 1..=N)
    #[arg(long, default_value_t = 14)]
    partitions: u32,
    /// Deepest unrolling for the Householder case (runs 0..=N)
    #[arg(long, default_value_t = 8)]
    depth: u32,
    /// Cross-check each case with this many random executions (0 = skip)
    #[arg(long, default_value_t = 0)]
    mc: u32,
    /// Seed for the Monte Carlo cross-check (decimal or 0x-prefixed hex)
    #[arg(long, value_parser = parse_seed, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Case {
    Arctan,
    Stolfi,
    Householder,
    All,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected LO,HI, got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if !(lo <= hi) {
        return Err(format!("empty range [{lo}, {hi}]"));
    }
    Ok((lo, hi))
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| e.to_string())
}

/// Formats with exactly twelve significant digits; non-finite values print
/// as `inf`/`-inf`.
fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Bounds(a) => cmd_bounds(&a),
        Cmd::Analyze(a) => cmd_analyze(&a),
        Cmd::Bench(a) => cmd_bench(&a),
    };
    ExitCode::from(code)
}

fn cmd_bounds(a: &BoundsArgs) -> u8 {
    let q = match parse_form(&a.form) {
        Ok(q) => q,
        Err(e) => {
            eprintln!("{e}");
            return 1;
        }
    };
    if a.resolution == 0 {
        eprintln!("resolution must be at least 1");
        return 2;
    }
    let r = match a.method {
        Method::Mt => q.concretize_mt(),
        Method::Sdp => gamma_sdp(&q),
        Method::Grid => grid_range(&q, a.resolution),
    };
    println!("{} {}", sig12(r.lo()), sig12(r.hi()));
    0
}

fn cmd_analyze(a: &AnalyzeArgs) -> u8 {
    let src = match fs::read_to_string(&a.file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cannot read {}: {e}", a.file.display());
            return 2;
        }
    };
    let cfg = AnalysisConfig {
        domain: a.domain.into(),
        conc: a.conc.into(),
        fp: a.fp,
        unroll_bound: a.unroll,
        ..AnalysisConfig::default()
    };
    match analyze(&src, &cfg) {
        Ok(r) => {
            let fmt = match a.format {
                FormatOpt::Text => Format::Text,
                FormatOpt::Json => Format::Json,
            };
            let out = report(&r, fmt);
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code() as u8
        }
    }
}

fn cmd_bench(a: &BenchArgs) -> u8 {
    let mut cfg = BenchConfig {
        domains: a.domains.iter().map(|&d| d.into()).collect(),
        concs: a.conc.iter().map(|&c| c.into()).collect(),
        partitions: (1..=a.partitions).collect(),
        depths: (0..=a.depth).collect(),
        ..BenchConfig::default()
    };
    if let Some(input) = a.input {
        match a.case {
            Case::Arctan => cfg.arctan_input = input,
            Case::Stolfi => cfg.stolfi_input = input,
            Case::Householder => cfg.householder_a = input,
            Case::All => {
                eprintln!("--input applies to a single case, not `all`");
                return 2;
            }
        }
    }
    let out = match run_case(a.case, &cfg) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("{e}");
            return bench_exit(&e);
        }
    };
    for note in &out.notes {
        eprintln!("note: {note}");
    }
    if let Err(e) = write_outputs(a, &out) {
        eprintln!("{e}");
        return bench_exit(&e);
    }
    if a.mc > 0 {
        match mc_check(a.case, &cfg, a.mc, a.seed) {
            Ok(violations) => {
                if violations > 0 {
                    return 3;
                }
            }
            Err(e) => {
                eprintln!("{e}");
                return bench_exit(&e);
            }
        }
    }
    0
}

fn run_case(case: Case, cfg: &BenchConfig) -> Result<BenchOutput, BenchError> {
    match case {
        Case::Arctan => run_arctan(cfg),
        Case::Stolfi => run_stolfi_series(cfg),
        Case::Householder => run_householder(&cfg.depths, cfg.householder_a, cfg),
        Case::All => run_all(cfg),
    }
}

fn write_outputs(a: &BenchArgs, out: &BenchOutput) -> Result<(), BenchError> {
    let mut wrote = false;
    if let Some(path) = &a.csv {
        emit(&out.rows, OutputFormat::Csv, path)?;
        wrote = true;
    }
    if let Some(path) = &a.md {
        emit(&out.rows, OutputFormat::Md, path)?;
        wrote = true;
    }
    if let Some(dir) = &a.plotdata {
        fs::create_dir_all(dir).map_err(BenchError::Io)?;
        emit_plotdata_dir(&out.rows, dir)?;
        wrote = true;
    }
    if !wrote {
        print!("{}", render(&out.rows, OutputFormat::Md));
    }
    Ok(())
}

/// Replays each selected case's program on random inputs and counts
/// executions that escape the reported boxes. Zero is the only sound
/// answer; any violation turns into exit code 3.
fn mc_check(case: Case, cfg: &BenchConfig, samples: u32, seed: u64) -> Result<u64, BenchError> {
    let mut sources: Vec<(&str, String)> = Vec::new();
    if matches!(case, Case::Arctan | Case::All) {
        sources.push(("arctan", qz_bench::gen_arctan(cfg.arctan_input)));
    }
    if matches!(case, Case::Stolfi | Case::All) {
        sources.push(("stolfi", qz_bench::gen_stolfi_cell(cfg.stolfi_input)));
    }
    if matches!(case, Case::Householder | Case::All) {
        let depth = cfg.depths.iter().copied().max().unwrap_or(0);
        sources.push((
            "householder",
            qz_bench::gen_householder(depth, cfg.householder_a),
        ));
    }
    let jobs: Vec<AnalysisConfig> = cfg
        .domains
        .iter()
        .flat_map(|&domain| {
            cfg.concs.iter().map(move |&conc| AnalysisConfig {
                domain,
                conc,
                ..AnalysisConfig::default()
            })
        })
        .collect();
    let mut total = 0;
    for (name, src) in &sources {
        let counts = mc_soundness_multi(src, &jobs, samples, seed)?;
        for (job, violations) in jobs.iter().zip(counts) {
            println!(
                "mc {name} {}/{}: {violations} violations in {samples} samples (seed {seed:#x})",
                job.domain, job.conc
            );
            total += violations;
        }
    }
    Ok(total)
}

fn bench_exit(e: &BenchError) -> u8 {
    match e {
        BenchError::Analysis(inner) => inner.exit_code() as u8,
        BenchError::Io(_) => 3,
        BenchError::Parameter(_) => 2,
    }
}
