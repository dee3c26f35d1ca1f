//! Guard refinement by forward–backward constraint propagation.
//!
//! A relation `lhs ⋈ rhs` is normalized to `d ⋈ 0` with `d = lhs − rhs` and
//! enforced as the half-line `d ∈ [0, ∞)` (or `(−∞, 0]`). A forward sweep
//! evaluates every subexpression of `d` with the active backend and records
//! its range; a backward sweep then pushes the half-line constraint from the
//! root towards the leaves, inverting each operator over intervals, and
//! collects the refined range of every variable occurrence. A variable whose
//! range shrank meaningfully is re-abstracted from its refined range; one
//! that kept (almost) its old range stays untouched, so relational
//! information is only given up when the guard actually pays for it.
//!
//! Strict and non-strict comparisons refine identically (the domain cannot
//! represent open endpoints), `=` is handled as `≥` followed by `≤`, and `≠`
//! refines nothing.

use std::collections::BTreeMap;

use qz_forms::{ExtInterval, QuadForm};

use crate::env::QuadVector;
use crate::expr::{BinOp, CmpOp, Expr, RelExpr};
use crate::value::{DomainError, DomainValue, EvalNote, EvalSettings};

/// A variable's range must shrink by more than this (relative to its old
/// width) before re-abstraction; smaller refinements never outweigh the
/// relational terms the re-abstraction would destroy.
pub(crate) const MIN_RELATIVE_SHRINK: f64 = 1e-12;

/// One subexpression of the normalized guard, with its forward range.
#[derive(Debug, Clone)]
pub(crate) struct FNode {
    pub range: ExtInterval,
    pub shape: FShape,
}

/// Node structure; children are indices into the same node vector.
#[derive(Debug, Clone)]
pub(crate) enum FShape {
    /// A literal (constant or fresh input range): nothing to refine.
    Leaf,
    Var(String),
    Bin(BinOp, usize, usize),
    Neg(usize),
    Sqrt(usize),
}

/// The refinement steps a relation induces: each step constrains the
/// normalized difference to one half-line. `≠` induces none, `=` two.
pub(crate) fn guard_plan(rel: &RelExpr) -> Vec<(Expr, ExtInterval)> {
    let diff = rel.normalized_diff();
    match rel.cmp {
        CmpOp::Ne => Vec::new(),
        CmpOp::Ge | CmpOp::Gt => vec![(diff, ExtInterval::at_least(0.0))],
        CmpOp::Le | CmpOp::Lt => vec![(diff, ExtInterval::at_most(0.0))],
        CmpOp::Eq => vec![
            (diff.clone(), ExtInterval::at_least(0.0)),
            (diff, ExtInterval::at_most(0.0)),
        ],
    }
}

/// Appends each note kind of `src` not already present in `dst`; the
/// forward sweep re-evaluates subexpressions, so kinds repeat.
pub(crate) fn merge_notes(dst: &mut Vec<EvalNote>, src: Vec<EvalNote>) {
    for n in src {
        if !dst.contains(&n) {
            dst.push(n);
        }
    }
}

/// Builds the forward tree of `e` in `nodes`, returning the root index.
/// `eval` supplies each subexpression's range as the backend sees it, which
/// for relational backends is tighter than recombining child intervals.
pub(crate) fn forward_tree<F>(
    e: &Expr,
    eval: &mut F,
    nodes: &mut Vec<FNode>,
) -> Result<usize, DomainError>
where
    F: FnMut(&Expr) -> Result<ExtInterval, DomainError>,
{
    let shape = match e {
        Expr::Const { .. } | Expr::Range { .. } => FShape::Leaf,
        Expr::Var(name) => FShape::Var(name.clone()),
        Expr::Neg(inner) => FShape::Neg(forward_tree(inner, eval, nodes)?),
        Expr::Sqrt(inner) => FShape::Sqrt(forward_tree(inner, eval, nodes)?),
        Expr::Bin { op, lhs, rhs } => {
            let l = forward_tree(lhs, eval, nodes)?;
            let r = forward_tree(rhs, eval, nodes)?;
            FShape::Bin(*op, l, r)
        }
    };
    nodes.push(FNode {
        range: eval(e)?,
        shape,
    });
    Ok(nodes.len() - 1)
}

/// Pushes `target` down from `nodes[idx]`, intersecting refined variable
/// ranges into `vars`. Returns `false` when some intersection is empty,
/// i.e. the guard is unsatisfiable over the forward ranges.
pub(crate) fn backward(
    nodes: &[FNode],
    idx: usize,
    target: ExtInterval,
    vars: &mut BTreeMap<String, ExtInterval>,
) -> bool {
    let refined = match nodes[idx].range.intersect(&target) {
        Some(r) => r,
        None => return false,
    };
    match &nodes[idx].shape {
        FShape::Leaf => true,
        FShape::Var(name) => match vars.get(name) {
            Some(prev) => match prev.intersect(&refined) {
                Some(merged) => {
                    vars.insert(name.clone(), merged);
                    true
                }
                None => false,
            },
            None => {
                vars.insert(name.clone(), refined);
                true
            }
        },
        FShape::Neg(c) => backward(nodes, *c, refined.neg(), vars),
        FShape::Sqrt(c) => {
            // The root of a defined √ lies in [0, ∞); squaring the refined
            // (nonnegative) range inverts it.
            let rn = match refined.intersect(&ExtInterval::at_least(0.0)) {
                Some(r) => r,
                None => return false,
            };
            backward(nodes, *c, rn.mul(&rn), vars)
        }
        FShape::Bin(op, l, r) => {
            let (ra, rb) = (nodes[*l].range, nodes[*r].range);
            // Interval inversions of `a op b = refined`; division by a range
            // containing zero yields the whole line, i.e. no refinement.
            let (ta, tb) = match op {
                BinOp::Add => (refined.sub(&rb), refined.sub(&ra)),
                BinOp::Sub => (refined.add(&rb), ra.sub(&refined)),
                BinOp::Mul => (refined.div(&rb), refined.div(&ra)),
                BinOp::Div => (refined.mul(&rb), ra.div(&refined)),
            };
            backward(nodes, *l, ta, vars) && backward(nodes, *r, tb, vars)
        }
    }
}

impl QuadVector {
    /// Restricts the environment to states satisfying `rel`. The result is
    /// all-bottom when the relation is provably unsatisfiable here.
    pub fn guard(
        &self,
        rel: &RelExpr,
        cfg: &EvalSettings,
        notes: &mut Vec<EvalNote>,
    ) -> Result<QuadVector, DomainError> {
        if self.is_bottom() {
            return Ok(self.clone());
        }
        let mut scratch = Vec::new();
        let mut out = self.clone();
        for (diff, half) in guard_plan(rel) {
            out = out.guard_half(&diff, half, cfg, &mut scratch)?;
        }
        merge_notes(notes, scratch);
        Ok(out)
    }

    fn guard_half(
        &self,
        diff: &Expr,
        half: ExtInterval,
        cfg: &EvalSettings,
        notes: &mut Vec<EvalNote>,
    ) -> Result<QuadVector, DomainError> {
        if self.is_bottom() {
            return Ok(self.clone());
        }
        let reg = self.registry_handle();
        let mut env = self.clone();
        for _ in 0..cfg.backward_passes.max(1) {
            let mut nodes = Vec::new();
            let root = {
                let snapshot = &env;
                let mut eval = |e: &Expr| -> Result<ExtInterval, DomainError> {
                    let v = snapshot.eval_expr(e, cfg, notes)?;
                    Ok(v.range(cfg.conc).unwrap_or_else(ExtInterval::whole))
                };
                forward_tree(diff, &mut eval, &mut nodes)?
            };
            let target = match nodes[root].range.intersect(&half) {
                Some(t) => t,
                None => return Ok(env.to_bottom()),
            };
            let mut refinements = BTreeMap::new();
            if !backward(&nodes, root, target, &mut refinements) {
                return Ok(env.to_bottom());
            }

            let mut changed = false;
            for (name, refined) in &refinements {
                match env.project(name)?.clone() {
                    DomainValue::Bottom => {}
                    DomainValue::Top => {
                        // Unknown before; adopt the refinement only if it
                        // actually bounds the variable.
                        if let Some(b) = refined.bounded() {
                            env.bind(name, DomainValue::Form(QuadForm::from_interval(b, &reg)));
                            changed = true;
                        }
                    }
                    DomainValue::Form(q) => {
                        let cur = cfg.conc.range(&q);
                        let new = match cur.intersect(refined) {
                            Some(n) => n,
                            None => return Ok(env.to_bottom()),
                        };
                        let (wo, wn) = (cur.width_up(), new.width_up());
                        let shrank = if wo.is_infinite() {
                            wn.is_finite()
                        } else {
                            wo > 0.0 && (wo - wn) / wo > MIN_RELATIVE_SHRINK
                        };
                        if shrank {
                            if let Some(b) = new.bounded() {
                                env.bind(name, DomainValue::Form(QuadForm::from_interval(b, &reg)));
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Ok(env)
    }
}
