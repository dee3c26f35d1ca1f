//! Monte-Carlo soundness oracles.
//!
//! A sample run draws one binary64 value per interval-literal occurrence
//! and executes the program in exact rational arithmetic, carrying each
//! quantity as a tight bracket `[lo, hi]` that is guaranteed to contain
//! the exact real result. Field operations keep brackets exact; square
//! roots widen them by a few ulp via directed binary64 rounding. A run
//! whose value the abstract box provably fails to contain counts as a
//! violation; the contract for every benchmark is zero violations.
//!
//! Samples are skipped (not counted either way) when the run leaves the
//! defined-execution universe — a failed `assume`, a division whose
//! divisor bracket straddles zero, a square root of a provably negative
//! bracket — or when a branch condition cannot be decided from the
//! bracket. The stock benchmarks only branch on exactly-represented
//! quantities, so their conditions always decide.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use qz_analyzer::{interpret, parse_program, AnalysisConfig, AnalyzerError, Program, Stmt};
use qz_domain::{CmpOp, Expr, RelExpr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::BenchError;

/// Denominator size (bits) past which brackets are rounded outward to a
/// fixed dyadic grid. Keeps iterated products from growing without bound
/// while staying far below the slack of any abstract box.
const COARSEN_AT_BITS: u64 = 128;
/// Grid used when coarsening: endpoints land on multiples of 2⁻⁹⁶. The
/// grid step (~1.3e-29) is ten orders of magnitude below the smallest
/// half-ulp an inexact abstract bound carries, and exact bounds are only
/// reachable by brackets that never grew past the threshold.
const GRID_BITS: usize = 96;

/// Exact rational comparison via cross-multiplication. Normalized
/// rationals keep positive denominators, so the sign is preserved; the
/// library's `Ord` walks the continued fraction instead, which is far too
/// slow at sampled-execution volumes.
fn rat_cmp(a: &BigRational, b: &BigRational) -> Ordering {
    let (sa, sb) = (a.numer().sign(), b.numer().sign());
    if sa != sb {
        return sa.cmp(&sb);
    }
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

fn rat_lt(a: &BigRational, b: &BigRational) -> bool {
    rat_cmp(a, b) == Ordering::Less
}

fn rat_le(a: &BigRational, b: &BigRational) -> bool {
    rat_cmp(a, b) != Ordering::Greater
}

/// Iteration budget for concrete `while` loops; a sample that exhausts it
/// is skipped rather than guessed at.
const LOOP_FUEL: u32 = 100_000;

#[derive(Clone, Copy, PartialEq)]
enum Sign {
    Neg,
    Mixed,
    Pos,
}

#[derive(Clone, Debug)]
struct Bracket {
    lo: BigRational,
    hi: BigRational,
}

impl Bracket {
    fn point(v: f64) -> Option<Bracket> {
        let r = BigRational::from_float(v)?;
        Some(Bracket {
            lo: r.clone(),
            hi: r,
        })
    }

    fn add(&self, other: &Bracket) -> Bracket {
        Bracket {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    fn sub(&self, other: &Bracket) -> Bracket {
        Bracket {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    fn neg(&self) -> Bracket {
        Bracket {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    /// Sign-cased product: at most two multiplications except when both
    /// operands straddle zero, which costs four plus two comparisons.
    fn mul(&self, other: &Bracket) -> Bracket {
        let (a, b) = (&self.lo, &self.hi);
        let (c, d) = (&other.lo, &other.hi);
        let (lo, hi) = match (self.sign_class(), other.sign_class()) {
            (Sign::Pos, Sign::Pos) => (a * c, b * d),
            (Sign::Pos, Sign::Neg) => (b * c, a * d),
            (Sign::Pos, Sign::Mixed) => (b * c, b * d),
            (Sign::Neg, Sign::Pos) => (a * d, b * c),
            (Sign::Neg, Sign::Neg) => (b * d, a * c),
            (Sign::Neg, Sign::Mixed) => (a * d, a * c),
            (Sign::Mixed, Sign::Pos) => (a * d, b * d),
            (Sign::Mixed, Sign::Neg) => (b * c, a * c),
            (Sign::Mixed, Sign::Mixed) => {
                let (ad, bc, ac, bd) = (a * d, b * c, a * c, b * d);
                (
                    if rat_le(&ad, &bc) { ad } else { bc },
                    if rat_le(&ac, &bd) { bd } else { ac },
                )
            }
        };
        coarsen(Bracket { lo, hi })
    }

    /// `None` when the divisor bracket straddles zero: the sample cannot
    /// certify which side the exact divisor falls on.
    fn div(&self, other: &Bracket) -> Option<Bracket> {
        if other.hi.is_negative() {
            return Some(self.neg().div_by_positive(&other.neg()));
        }
        if !other.lo.is_positive() {
            return None;
        }
        Some(self.div_by_positive(other))
    }

    /// Quotient for a divisor bracket that is entirely positive; two
    /// divisions, chosen by the dividend's endpoint signs.
    fn div_by_positive(&self, other: &Bracket) -> Bracket {
        let (a, b) = (&self.lo, &self.hi);
        let (c, d) = (&other.lo, &other.hi);
        let lo = if a.is_negative() { a / c } else { a / d };
        let hi = if b.is_negative() { b / d } else { b / c };
        coarsen(Bracket { lo, hi })
    }

    fn sign_class(&self) -> Sign {
        if !self.lo.is_negative() {
            Sign::Pos
        } else if !self.hi.is_positive() {
            Sign::Neg
        } else {
            Sign::Mixed
        }
    }

    /// `None` when the argument is provably negative (no defined run) or
    /// too large to bound in binary64. A bracket straddling zero clips to
    /// zero: a defined run's argument is ≥ 0, so the clipped bracket
    /// still contains its root.
    fn sqrt(&self) -> Option<Bracket> {
        if self.hi.is_negative() {
            return None;
        }
        let lo = if self.lo.is_positive() {
            sqrt_down(&self.lo)?
        } else {
            BigRational::zero()
        };
        Some(coarsen(Bracket {
            lo,
            hi: sqrt_up(&self.hi)?,
        }))
    }
}

/// Outward rounding onto the dyadic grid once denominators grow past the
/// threshold; enlarging a bracket never loses the exact value.
fn coarsen(b: Bracket) -> Bracket {
    if b.lo.denom().bits().max(b.hi.denom().bits()) <= COARSEN_AT_BITS {
        return b;
    }
    let scale = BigRational::from_integer(BigInt::one() << GRID_BITS);
    Bracket {
        lo: (&b.lo * &scale).floor() / &scale,
        hi: (&b.hi * &scale).ceil() / &scale,
    }
}

/// Lower bound on √v for v > 0 via directed binary64 rounding: round the
/// argument down before the correctly-rounded `sqrt`, then step the
/// result down once more.
fn sqrt_down(v: &BigRational) -> Option<BigRational> {
    let f = v.to_f64()?;
    if !f.is_finite() {
        return None;
    }
    let r = f.next_down().max(0.0).sqrt().next_down().max(0.0);
    BigRational::from_float(r)
}

/// Upper bound on √v for v ≥ 0, mirrored upward.
fn sqrt_up(v: &BigRational) -> Option<BigRational> {
    let f = v.to_f64()?;
    if !f.is_finite() {
        return None;
    }
    let r = f.next_up().max(0.0).sqrt().next_up();
    if !r.is_finite() {
        return None;
    }
    BigRational::from_float(r)
}

type ConcreteEnv = BTreeMap<String, Bracket>;

/// `None` means the sample is skipped (undefined or undecidable run).
fn eval(e: &Expr, env: &ConcreteEnv, rng: &mut ChaCha8Rng) -> Option<Bracket> {
    match e {
        Expr::Const { value, .. } => Bracket::point(*value),
        Expr::Range { lo, hi } => Bracket::point(rng.random_range(*lo..=*hi)),
        Expr::Var(name) => Some(
            env.get(name)
                .expect("parser enforces definite assignment")
                .clone(),
        ),
        Expr::Neg(inner) => Some(eval(inner, env, rng)?.neg()),
        Expr::Sqrt(inner) => eval(inner, env, rng)?.sqrt(),
        Expr::Bin { op, lhs, rhs } => {
            let a = eval(lhs, env, rng)?;
            let b = eval(rhs, env, rng)?;
            match op {
                qz_domain::BinOp::Add => Some(a.add(&b)),
                qz_domain::BinOp::Sub => Some(a.sub(&b)),
                qz_domain::BinOp::Mul => Some(a.mul(&b)),
                qz_domain::BinOp::Div => a.div(&b),
            }
        }
    }
}

/// Definite truth of `a cmp b`, or `None` when the brackets overlap in a
/// way that leaves the comparison undecided.
fn truth(cmp: CmpOp, a: &Bracket, b: &Bracket) -> Option<bool> {
    match cmp {
        CmpOp::Ge => {
            if rat_le(&b.hi, &a.lo) {
                Some(true)
            } else if rat_lt(&a.hi, &b.lo) {
                Some(false)
            } else {
                None
            }
        }
        CmpOp::Gt => {
            if rat_lt(&b.hi, &a.lo) {
                Some(true)
            } else if rat_le(&a.hi, &b.lo) {
                Some(false)
            } else {
                None
            }
        }
        CmpOp::Le => truth(CmpOp::Ge, b, a),
        CmpOp::Lt => truth(CmpOp::Gt, b, a),
        CmpOp::Eq => {
            if a.lo == a.hi && b.lo == b.hi && a.lo == b.lo {
                Some(true)
            } else if rat_lt(&a.hi, &b.lo) || rat_lt(&b.hi, &a.lo) {
                Some(false)
            } else {
                None
            }
        }
        CmpOp::Ne => truth(CmpOp::Eq, a, b).map(|t| !t),
    }
}

fn eval_rel(r: &RelExpr, env: &ConcreteEnv, rng: &mut ChaCha8Rng) -> Option<bool> {
    let a = eval(&r.lhs, env, rng)?;
    let b = eval(&r.rhs, env, rng)?;
    truth(r.cmp, &a, &b)
}

fn exec_block(stmts: &[Stmt], env: &mut ConcreteEnv, rng: &mut ChaCha8Rng) -> Option<()> {
    for st in stmts {
        exec_stmt(st, env, rng)?;
    }
    Some(())
}

fn exec_stmt(st: &Stmt, env: &mut ConcreteEnv, rng: &mut ChaCha8Rng) -> Option<()> {
    match st {
        Stmt::Assign(name, e) => {
            let v = eval(e, env, rng)?;
            env.insert(name.clone(), v);
        }
        Stmt::Assume(rel) => {
            if !eval_rel(rel, env, rng)? {
                return None;
            }
        }
        Stmt::If(cond, then_block, else_block) => {
            if eval_rel(cond, env, rng)? {
                exec_block(then_block, env, rng)?;
            } else {
                exec_block(else_block, env, rng)?;
            }
        }
        Stmt::While(cond, body) => {
            let mut fuel = LOOP_FUEL;
            while eval_rel(cond, env, rng)? {
                exec_block(body, env, rng)?;
                fuel -= 1;
                if fuel == 0 {
                    return None;
                }
            }
        }
    }
    Some(())
}

/// Per-variable abstract bounds as rationals; `None` endpoint = that side
/// is infinite, outer `None` = the analyzer reported the variable
/// unreachable.
type RationalBounds = Vec<(String, Option<(Option<BigRational>, Option<BigRational>)>)>;

fn rational_bounds(cfg: &AnalysisConfig, program: &Program) -> Result<RationalBounds, BenchError> {
    let outcome = interpret(program, cfg)?;
    Ok(outcome
        .vars
        .iter()
        .map(|(name, iv)| {
            let b = iv.map(|iv| (finite_rational(iv.lo()), finite_rational(iv.hi())));
            (name.clone(), b)
        })
        .collect())
}

fn finite_rational(v: f64) -> Option<BigRational> {
    v.is_finite().then(|| {
        BigRational::from_float(v).expect("finite binary64 values are rational")
    })
}

/// Runs `samples` exact executions of `src` and counts the runs whose
/// value provably escapes the abstract box computed under `cfg`. Sound
/// analyses return 0.
pub fn mc_soundness(
    src: &str,
    cfg: &AnalysisConfig,
    samples: u32,
    seed: u64,
) -> Result<u64, BenchError> {
    Ok(mc_soundness_multi(src, std::slice::from_ref(cfg), samples, seed)?[0])
}

/// One sampling pass checked against several configurations' boxes at
/// once: the concrete executions are identical across configurations, so
/// sharing them divides the dominant cost by the configuration count.
/// Returns the violation count per configuration, in input order.
pub fn mc_soundness_multi(
    src: &str,
    cfgs: &[AnalysisConfig],
    samples: u32,
    seed: u64,
) -> Result<Vec<u64>, BenchError> {
    let program = parse_program(src).map_err(AnalyzerError::from)?;
    let all_bounds: Vec<RationalBounds> = cfgs
        .iter()
        .map(|cfg| rational_bounds(cfg, &program))
        .collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = vec![0u64; cfgs.len()];
    for _ in 0..samples {
        let mut env = ConcreteEnv::new();
        if exec_block(&program.stmts, &mut env, &mut rng).is_none() {
            continue;
        }
        for (count, bounds) in violations.iter_mut().zip(&all_bounds) {
            let mut escaped = false;
            for (name, b) in bounds {
                let Some(run) = env.get(name) else { continue };
                match b {
                    // The box says this variable's paths are unreachable,
                    // yet a concrete run completed with a value for it.
                    None => escaped = true,
                    Some((lo, hi)) => {
                        if lo.as_ref().is_some_and(|l| rat_lt(&run.lo, l))
                            || hi.as_ref().is_some_and(|h| rat_lt(h, &run.hi))
                        {
                            escaped = true;
                        }
                    }
                }
            }
            *count += u64::from(escaped);
        }
    }
    Ok(violations)
}

/// Outer hull of the sampled exact runs: per variable, the widest range
/// any completed sample's bracket reached, rounded outward to binary64.
/// Variables never live in a completed run are absent.
pub fn mc_hull(
    src: &str,
    samples: u32,
    seed: u64,
) -> Result<BTreeMap<String, (f64, f64)>, BenchError> {
    let program = parse_program(src).map_err(AnalyzerError::from)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hull: BTreeMap<String, (f64, f64)> = BTreeMap::new();
    for _ in 0..samples {
        let mut env = ConcreteEnv::new();
        if exec_block(&program.stmts, &mut env, &mut rng).is_none() {
            continue;
        }
        for (name, b) in env {
            let lo = b.lo.to_f64().unwrap_or(f64::NEG_INFINITY).next_down();
            let hi = b.hi.to_f64().unwrap_or(f64::INFINITY).next_up();
            hull.entry(name)
                .and_modify(|(l, h)| {
                    *l = l.min(lo);
                    *h = h.max(hi);
                })
                .or_insert((lo, hi));
        }
    }
    Ok(hull)
}
