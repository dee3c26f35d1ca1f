//! Sampled soundness of guard refinement: every concrete state that
//! satisfies a relation (with margin, to sidestep borderline rounding)
//! must survive the abstract refinement.

use std::collections::BTreeMap;

use qz_domain::{
    BinOp, CmpOp, Concretization, DomainValue, EvalSettings, Expr, QuadVector, RelExpr,
};
use qz_forms::{NoiseSym, QuadForm};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Satisfaction margin: samples closer than this to the relation boundary
/// are skipped, since f64 evaluation cannot classify them reliably.
const MARGIN: f64 = 1e-9;

fn concrete(e: &Expr, state: &BTreeMap<&str, f64>) -> f64 {
    match e {
        Expr::Const { value, .. } => *value,
        Expr::Range { lo, hi } => (lo + hi) / 2.0,
        Expr::Var(n) => state[n.as_str()],
        Expr::Neg(c) => -concrete(c, state),
        Expr::Sqrt(c) => concrete(c, state).sqrt(),
        Expr::Bin { op, lhs, rhs } => {
            let a = concrete(lhs, state);
            let b = concrete(rhs, state);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
            }
        }
    }
}

/// Strict-with-margin satisfaction of `rel` at `state`.
fn satisfied(rel: &RelExpr, state: &BTreeMap<&str, f64>) -> Option<bool> {
    let v = concrete(&rel.normalized_diff(), state);
    if !v.is_finite() || v.abs() < MARGIN {
        return None;
    }
    Some(rel.cmp.holds_against_zero(v))
}

/// Degree-2 polynomial without error slots: its value at a noise point is
/// an ordinary f64 evaluation.
fn poly_value(q: &QuadForm, t: &[f64], syms: &[NoiseSym]) -> f64 {
    let at = |s: NoiseSym| {
        syms.iter()
            .position(|x| *x == s)
            .map(|i| t[i])
            .unwrap_or(0.0)
    };
    let mut v = q.center();
    for (s, b) in q.linear() {
        v += b * at(*s);
    }
    for ((i, j), a) in q.quad() {
        v += a * at(*i) * at(*j);
    }
    v
}

fn random_rel(rng: &mut ChaCha8Rng) -> RelExpr {
    let lhs = match rng.random_range(0..8) {
        0 => Expr::var("x"),
        1 => Expr::var("y"),
        2 => Expr::bin(BinOp::Add, Expr::var("x"), Expr::var("y")),
        3 => Expr::bin(BinOp::Sub, Expr::var("x"), Expr::var("y")),
        4 => Expr::bin(BinOp::Mul, Expr::var("x"), Expr::var("y")),
        5 => Expr::bin(BinOp::Div, Expr::var("x"), Expr::var("y")),
        6 => Expr::Sqrt(Box::new(Expr::bin(
            BinOp::Add,
            Expr::var("x"),
            Expr::number(3.0),
        ))),
        _ => Expr::bin(BinOp::Mul, Expr::var("x"), Expr::var("x")),
    };
    let cmp = *[
        CmpOp::Ge,
        CmpOp::Le,
        CmpOp::Gt,
        CmpOp::Lt,
        CmpOp::Eq,
        CmpOp::Ne,
    ]
    .choose(rng)
    .unwrap();
    RelExpr::new(lhs, cmp, Expr::number(rng.random_range(-2.0..2.0)))
}

#[test]
fn guarded_environments_keep_every_satisfying_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let cfg = EvalSettings::default();
    let mut refined_guards = 0;
    for _ in 0..100 {
        let mut env = QuadVector::with_fresh_registry();
        let syms = [env.registry().fresh(), env.registry().fresh()];
        let mut forms = Vec::new();
        for name in ["x", "y"] {
            let linear: Vec<_> = syms
                .iter()
                .map(|s| (*s, rng.random_range(-1.5..1.5)))
                .collect();
            let quad = if rng.random_bool(0.5) {
                vec![((syms[0], syms[rng.random_range(0..2)]), rng.random_range(-1.0..1.0))]
            } else {
                Vec::new()
            };
            let q = QuadForm::new(rng.random_range(-2.0..2.0), linear, quad, 0.0, 0.0, 0.0)
                .unwrap();
            env.bind(name, DomainValue::Form(q.clone()));
            forms.push(q);
        }
        let rel = random_rel(&mut rng);
        let mut notes = Vec::new();
        let guarded = env.guard(&rel, &cfg, &mut notes).unwrap();
        let boxes = guarded.box_bounds(Concretization::Mt);
        if boxes.is_some() {
            refined_guards += 1;
        }

        for _ in 0..1000 {
            let t = [
                rng.random_range(-1.0..=1.0),
                rng.random_range(-1.0..=1.0),
            ];
            let state: BTreeMap<&str, f64> = [
                ("x", poly_value(&forms[0], &t, &syms)),
                ("y", poly_value(&forms[1], &t, &syms)),
            ]
            .into();
            if satisfied(&rel, &state) != Some(true) {
                continue;
            }
            match &boxes {
                None => panic!(
                    "guard {rel:?} claimed unsatisfiable, but {state:?} satisfies it"
                ),
                Some(b) => {
                    for (name, range) in b {
                        let v = state[name.as_str()];
                        assert!(
                            v >= range.lo() - MARGIN && v <= range.hi() + MARGIN,
                            "{name} = {v} escaped {range} after guard {rel:?}"
                        );
                    }
                }
            }
        }
    }
    assert!(refined_guards > 50, "battery should mostly stay satisfiable");
}
