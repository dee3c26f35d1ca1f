//! Interval and affine baselines over the same expression language, and
//! the dispatcher that lets callers pick a backend at runtime.
//!
//! Both baselines implement the full environment interface — evaluate,
//! assign, join, meet, guard, box — so analyses can be run degree-by-degree
//! (interval, affine, quadratic) on identical programs and compared. The
//! interval backend is non-relational; the affine backend shares plain
//! noise symbols across variables but has no quadratic or one-sided terms.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use qz_forms::{AffineForm, BandError, ExtInterval, Interval, NoiseRegistry};

use crate::env::{QuadVector, VarBox};
use crate::expr::{BinOp, Expr, RelExpr};
use crate::guard::{backward, forward_tree, guard_plan, merge_notes, MIN_RELATIVE_SHRINK};
use crate::join::argmin;
use crate::value::{Concretization, DomainError, DomainValue, EvalNote, EvalSettings};

/// Selects the abstract environment an analysis runs with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Interval,
    Affine,
    Quad,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Interval => "interval",
            Backend::Affine => "affine",
            Backend::Quad => "quad",
        })
    }
}

// ---------------------------------------------------------------------
// Interval backend
// ---------------------------------------------------------------------

/// A non-relational box: each variable carries one interval (possibly
/// half-infinite); `None` marks the unreachable environment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalEnv {
    vars: Vec<(String, Option<ExtInterval>)>,
}

impl IntervalEnv {
    pub fn new() -> IntervalEnv {
        IntervalEnv::default()
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&str, &Option<ExtInterval>)> {
        self.vars.iter().map(|(n, v)| (n.as_str(), v))
    }

    pub fn project(&self, name: &str) -> Result<&Option<ExtInterval>, DomainError> {
        self.vars
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
            .ok_or_else(|| DomainError::Unbound(name.to_string()))
    }

    pub fn bind(&mut self, name: &str, value: Option<ExtInterval>) {
        match self.vars.iter_mut().find(|(n, _)| n == name) {
            Some((_, slot)) => *slot = value,
            None => self.vars.push((name.to_string(), value)),
        }
    }

    pub fn is_bottom(&self) -> bool {
        self.vars.iter().any(|(_, v)| v.is_none())
    }

    pub fn to_bottom(&self) -> IntervalEnv {
        IntervalEnv {
            vars: self.vars.iter().map(|(n, _)| (n.clone(), None)).collect(),
        }
    }

    fn normalized(self) -> IntervalEnv {
        if self.is_bottom() {
            self.to_bottom()
        } else {
            self
        }
    }

    /// Interval recursion over `e`; every operation is total once widened
    /// (division by a range containing zero yields the whole line).
    pub fn eval(
        &self,
        e: &Expr,
        cfg: &EvalSettings,
        notes: &mut Vec<EvalNote>,
    ) -> Result<Option<ExtInterval>, DomainError> {
        Ok(Some(match e {
            Expr::Const { value, conv_err } => {
                let point = ExtInterval::point(*value);
                if cfg.fp && *conv_err > 0.0 {
                    match ExtInterval::new(-*conv_err, *conv_err) {
                        Ok(slack) => point.add(&slack),
                        Err(_) => point,
                    }
                } else {
                    point
                }
            }
            Expr::Range { lo, hi } => match ExtInterval::new(*lo, *hi) {
                Ok(i) => i,
                Err(_) => {
                    notes.push(EvalNote::RangeOverflow);
                    ExtInterval::whole()
                }
            },
            Expr::Var(name) => return Ok(*self.project(name)?),
            Expr::Neg(inner) => match self.eval(inner, cfg, notes)? {
                Some(i) => i.neg(),
                None => return Ok(None),
            },
            Expr::Sqrt(inner) => match self.eval(inner, cfg, notes)? {
                Some(i) => match i.sqrt() {
                    Some(r) => r,
                    None => {
                        notes.push(EvalNote::SqrtOfNegative);
                        ExtInterval::whole()
                    }
                },
                None => return Ok(None),
            },
            Expr::Bin { op, lhs, rhs } => {
                let (Some(a), Some(b)) =
                    (self.eval(lhs, cfg, notes)?, self.eval(rhs, cfg, notes)?)
                else {
                    return Ok(None);
                };
                match op {
                    BinOp::Add => a.add(&b),
                    BinOp::Sub => a.sub(&b),
                    BinOp::Mul => a.mul(&b),
                    BinOp::Div => {
                        if b.contains(0.0) {
                            notes.push(EvalNote::DivisorMayBeZero);
                        }
                        a.div(&b)
                    }
                }
            }
        }))
    }

    pub fn assign(
        &self,
        k: &str,
        e: &Expr,
        cfg: &EvalSettings,
        notes: &mut Vec<EvalNote>,
    ) -> Result<IntervalEnv, DomainError> {
        let v = self.eval(e, cfg, notes)?;
        let mut out = self.clone();
        out.bind(k, v);
        Ok(out.normalized())
    }

    pub fn join(&self, other: &IntervalEnv) -> Result<IntervalEnv, DomainError> {
        let mut out = IntervalEnv::new();
        for (name, va, vb) in zip_names(&self.vars, &other.vars)? {
            let v = match (va, vb) {
                (None, w) | (w, None) => *w,
                (Some(a), Some(b)) => Some(a.hull(b)),
            };
            out.bind(name, v);
        }
        Ok(out)
    }

    pub fn meet(&self, other: &IntervalEnv) -> Result<IntervalEnv, DomainError> {
        let mut out = IntervalEnv::new();
        for (name, va, vb) in zip_names(&self.vars, &other.vars)? {
            let v = match (va, vb) {
                (None, _) | (_, None) => None,
                (Some(a), Some(b)) => a.intersect(b),
            };
            out.bind(name, v);
        }
        Ok(out.normalized())
    }

    pub fn guard(
        &self,
        rel: &RelExpr,
        cfg: &EvalSettings,
        notes: &mut Vec<EvalNote>,
    ) -> Result<IntervalEnv, DomainError> {
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
    ) -> Result<IntervalEnv, DomainError> {
        if self.is_bottom() {
            return Ok(self.clone());
        }
        let mut env = self.clone();
        for _ in 0..cfg.backward_passes.max(1) {
            let mut nodes = Vec::new();
            let root = {
                let snapshot = &env;
                let mut eval = |e: &Expr| -> Result<ExtInterval, DomainError> {
                    Ok(snapshot
                        .eval(e, cfg, notes)?
                        .unwrap_or_else(ExtInterval::whole))
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
                let cur = match env.project(name)? {
                    Some(c) => *c,
                    None => continue,
                };
                // Intervals have no relational content to protect, so any
                // refinement is adopted, half-lines included.
                let new = match cur.intersect(refined) {
                    Some(n) => n,
                    None => return Ok(env.to_bottom()),
                };
                if new != cur {
                    env.bind(name, Some(new));
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(env)
    }

    pub fn box_bounds(&self) -> Option<VarBox> {
        self.vars
            .iter()
            .map(|(n, v)| Some((n.clone(), (*v)?)))
            .collect()
    }
}

/// Zips two binding lists over an identical name set, in `a`'s order.
fn zip_names<'a, T>(
    a: &'a [(String, T)],
    b: &'a [(String, T)],
) -> Result<Vec<(&'a str, &'a T, &'a T)>, DomainError> {
    if let Some((name, _)) = b.iter().find(|(n, _)| !a.iter().any(|(m, _)| m == n)) {
        return Err(DomainError::VarSetMismatch(name.clone()));
    }
    a.iter()
        .map(|(name, va)| {
            b.iter()
                .find(|(n, _)| n == name)
                .map(|(_, vb)| (name.as_str(), va, vb))
                .ok_or_else(|| DomainError::VarSetMismatch(name.clone()))
        })
        .collect()
}

// ---------------------------------------------------------------------
// Affine backend
// ---------------------------------------------------------------------

/// A variable's value in the affine backend.
#[derive(Debug, Clone, PartialEq)]
pub enum AffValue {
    Bottom,
    Form(AffineForm),
    Top,
}

impl AffValue {
    pub fn is_bottom(&self) -> bool {
        matches!(self, AffValue::Bottom)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, AffValue::Top)
    }

    pub fn as_form(&self) -> Option<&AffineForm> {
        match self {
            AffValue::Form(q) => Some(q),
            _ => None,
        }
    }

    pub fn range(&self) -> Option<ExtInterval> {
        match self {
            AffValue::Bottom => None,
            AffValue::Form(q) => Some(q.concretize()),
            AffValue::Top => Some(ExtInterval::whole()),
        }
    }
}

/// Variables over affine forms with one shared symbol registry.
#[derive(Debug, Clone)]
pub struct AffineEnv {
    registry: Arc<NoiseRegistry>,
    vars: Vec<(String, AffValue)>,
}

impl AffineEnv {
    pub fn new(registry: Arc<NoiseRegistry>) -> AffineEnv {
        AffineEnv {
            registry,
            vars: Vec::new(),
        }
    }

    pub fn with_fresh_registry() -> AffineEnv {
        Self::new(Arc::new(NoiseRegistry::new()))
    }

    pub fn registry(&self) -> &NoiseRegistry {
        &self.registry
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&str, &AffValue)> {
        self.vars.iter().map(|(n, v)| (n.as_str(), v))
    }

    pub fn project(&self, name: &str) -> Result<&AffValue, DomainError> {
        self.vars
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
            .ok_or_else(|| DomainError::Unbound(name.to_string()))
    }

    pub fn bind(&mut self, name: &str, value: AffValue) {
        match self.vars.iter_mut().find(|(n, _)| n == name) {
            Some((_, slot)) => *slot = value,
            None => self.vars.push((name.to_string(), value)),
        }
    }

    pub fn is_bottom(&self) -> bool {
        self.vars.iter().any(|(_, v)| v.is_bottom())
    }

    pub fn to_bottom(&self) -> AffineEnv {
        AffineEnv {
            registry: Arc::clone(&self.registry),
            vars: self
                .vars
                .iter()
                .map(|(n, _)| (n.clone(), AffValue::Bottom))
                .collect(),
        }
    }

    fn normalized(self) -> AffineEnv {
        if self.is_bottom() {
            self.to_bottom()
        } else {
            self
        }
    }

    pub fn eval(
        &self,
        e: &Expr,
        cfg: &EvalSettings,
        notes: &mut Vec<EvalNote>,
    ) -> Result<AffValue, DomainError> {
        let overflowed = |notes: &mut Vec<EvalNote>| {
            notes.push(EvalNote::RangeOverflow);
            AffValue::Top
        };
        Ok(match e {
            Expr::Const { value, conv_err } => {
                let built = if cfg.fp && *conv_err > 0.0 {
                    AffineForm::new(*value, [(self.registry.fresh(), *conv_err)])
                } else {
                    AffineForm::constant(*value)
                };
                match built {
                    Ok(q) => AffValue::Form(q),
                    Err(_) => overflowed(notes),
                }
            }
            Expr::Range { lo, hi } => match Interval::new(*lo, *hi) {
                Ok(i) => AffValue::Form(AffineForm::from_interval(i, &self.registry)),
                Err(_) => overflowed(notes),
            },
            Expr::Var(name) => self.project(name)?.clone(),
            Expr::Neg(inner) => match self.eval(inner, cfg, notes)? {
                AffValue::Form(q) => AffValue::Form(q.neg()),
                other => other,
            },
            Expr::Sqrt(inner) => match self.eval(inner, cfg, notes)? {
                AffValue::Form(q) => match q.sqrt(&self.registry) {
                    Ok(r) => AffValue::Form(r),
                    Err(BandError::SqrtNegative(..)) => {
                        notes.push(EvalNote::SqrtOfNegative);
                        AffValue::Top
                    }
                    Err(_) => overflowed(notes),
                },
                other => other,
            },
            Expr::Bin { op, lhs, rhs } => {
                let a = self.eval(lhs, cfg, notes)?;
                let b = self.eval(rhs, cfg, notes)?;
                let (qa, qb) = match (a, b) {
                    (AffValue::Bottom, _) | (_, AffValue::Bottom) => return Ok(AffValue::Bottom),
                    (AffValue::Top, _) | (_, AffValue::Top) => return Ok(AffValue::Top),
                    (AffValue::Form(qa), AffValue::Form(qb)) => (qa, qb),
                };
                let reg = &self.registry;
                let result = match op {
                    BinOp::Add => qa.add(&qb, reg),
                    BinOp::Sub => qa.sub(&qb, reg),
                    BinOp::Mul => qa.mul(&qb, reg),
                    BinOp::Div => match qb.recip(reg) {
                        Ok(inv) => qa.mul(&inv, reg),
                        Err(BandError::RecipThroughZero(..)) => {
                            notes.push(EvalNote::DivisorMayBeZero);
                            return Ok(AffValue::Top);
                        }
                        Err(_) => return Ok(overflowed(notes)),
                    },
                };
                match result {
                    Ok(q) => AffValue::Form(q),
                    Err(_) => overflowed(notes),
                }
            }
        })
    }

    pub fn assign(
        &self,
        k: &str,
        e: &Expr,
        cfg: &EvalSettings,
        notes: &mut Vec<EvalNote>,
    ) -> Result<AffineEnv, DomainError> {
        let v = self.eval(e, cfg, notes)?;
        let mut out = self.clone();
        out.bind(k, v);
        Ok(out.normalized())
    }

    pub fn join(&self, other: &AffineEnv) -> Result<AffineEnv, DomainError> {
        let mut out = AffineEnv::new(Arc::clone(&self.registry));
        for (name, va, vb) in zip_names(&self.vars, &other.vars)? {
            let v = match (va, vb) {
                (AffValue::Bottom, w) | (w, AffValue::Bottom) => w.clone(),
                (AffValue::Top, _) | (_, AffValue::Top) => AffValue::Top,
                (AffValue::Form(a), AffValue::Form(b)) => {
                    match join_affine(a, b, &self.registry) {
                        Some(j) => AffValue::Form(j),
                        None => AffValue::Top,
                    }
                }
            };
            out.bind(name, v);
        }
        Ok(out)
    }

    pub fn meet(&self, other: &AffineEnv) -> Result<AffineEnv, DomainError> {
        let mut out = AffineEnv::new(Arc::clone(&self.registry));
        for (name, va, vb) in zip_names(&self.vars, &other.vars)? {
            let v = if va == vb {
                va.clone()
            } else {
                match (va, vb) {
                    (AffValue::Bottom, _) | (_, AffValue::Bottom) => AffValue::Bottom,
                    (AffValue::Top, w) | (w, AffValue::Top) => w.clone(),
                    (AffValue::Form(a), AffValue::Form(b)) => {
                        match a.concretize().intersect(&b.concretize()) {
                            None => AffValue::Bottom,
                            Some(i) => match i.bounded() {
                                Some(fin) => {
                                    AffValue::Form(AffineForm::from_interval(fin, &self.registry))
                                }
                                None => AffValue::Top,
                            },
                        }
                    }
                }
            };
            out.bind(name, v);
        }
        Ok(out.normalized())
    }

    pub fn guard(
        &self,
        rel: &RelExpr,
        cfg: &EvalSettings,
        notes: &mut Vec<EvalNote>,
    ) -> Result<AffineEnv, DomainError> {
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
    ) -> Result<AffineEnv, DomainError> {
        if self.is_bottom() {
            return Ok(self.clone());
        }
        let reg = Arc::clone(&self.registry);
        let mut env = self.clone();
        for _ in 0..cfg.backward_passes.max(1) {
            let mut nodes = Vec::new();
            let root = {
                let snapshot = &env;
                let mut eval = |e: &Expr| -> Result<ExtInterval, DomainError> {
                    Ok(snapshot
                        .eval(e, cfg, notes)?
                        .range()
                        .unwrap_or_else(ExtInterval::whole))
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
                    AffValue::Bottom => {}
                    AffValue::Top => {
                        if let Some(b) = refined.bounded() {
                            env.bind(name, AffValue::Form(AffineForm::from_interval(b, &reg)));
                            changed = true;
                        }
                    }
                    AffValue::Form(q) => {
                        let cur = q.concretize();
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
                                env.bind(name, AffValue::Form(AffineForm::from_interval(b, &reg)));
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

    pub fn box_bounds(&self) -> Option<VarBox> {
        self.vars
            .iter()
            .map(|(n, v)| Some((n.clone(), v.range()?)))
            .collect()
    }
}

/// Affine analogue of the quadratic join: recenter on the hull midpoint,
/// fuse coefficients by [`argmin`], absorb both deviations into one fresh
/// symbol. `None` when anything leaves the finite domain.
fn join_affine(x: &AffineForm, y: &AffineForm, reg: &NoiseRegistry) -> Option<AffineForm> {
    let hull = x.concretize().hull(&y.concretize()).bounded()?;
    let syms: BTreeSet<_> = x.linear().keys().chain(y.linear().keys()).copied().collect();
    let linear: Vec<_> = syms
        .into_iter()
        .map(|s| (s, argmin(x.linear_coeff(s), y.linear_coeff(s))))
        .collect();
    let combined = AffineForm::new(hull.mid(), linear).ok()?;
    let dev_x = x.sub(&combined, reg).ok()?.concretize();
    let dev_y = y.sub(&combined, reg).ok()?.concretize();
    let residual = AffineForm::from_interval(dev_x.hull(&dev_y).bounded()?, reg);
    combined.add(&residual, reg).ok()
}

// ---------------------------------------------------------------------
// Dispatcher
// ---------------------------------------------------------------------

/// An environment of whichever backend the analysis selected. Binary
/// operations (join, meet) require both sides to come from the same
/// backend and panic otherwise; that is a caller bug, not a program
/// property.
#[derive(Debug, Clone)]
pub enum AnyEnv {
    Interval(IntervalEnv),
    Affine(AffineEnv),
    Quad(QuadVector),
}

impl AnyEnv {
    pub fn new(backend: Backend) -> AnyEnv {
        match backend {
            Backend::Interval => AnyEnv::Interval(IntervalEnv::new()),
            Backend::Affine => AnyEnv::Affine(AffineEnv::with_fresh_registry()),
            Backend::Quad => AnyEnv::Quad(QuadVector::with_fresh_registry()),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            AnyEnv::Interval(_) => Backend::Interval,
            AnyEnv::Affine(_) => Backend::Affine,
            AnyEnv::Quad(_) => Backend::Quad,
        }
    }

    /// Bound variable names in insertion order.
    pub fn names(&self) -> Vec<String> {
        match self {
            AnyEnv::Interval(e) => e.bindings().map(|(n, _)| n.to_string()).collect(),
            AnyEnv::Affine(e) => e.bindings().map(|(n, _)| n.to_string()).collect(),
            AnyEnv::Quad(e) => e.bindings().map(|(n, _)| n.to_string()).collect(),
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        match self {
            AnyEnv::Interval(e) => e.project(name).is_ok(),
            AnyEnv::Affine(e) => e.project(name).is_ok(),
            AnyEnv::Quad(e) => e.project(name).is_ok(),
        }
    }

    /// Binds `name` to the unconstrained value of the backend.
    pub fn bind_top(&mut self, name: &str) {
        match self {
            AnyEnv::Interval(e) => e.bind(name, Some(ExtInterval::whole())),
            AnyEnv::Affine(e) => e.bind(name, AffValue::Top),
            AnyEnv::Quad(e) => e.bind(name, DomainValue::Top),
        }
    }

    pub fn is_bottom(&self) -> bool {
        match self {
            AnyEnv::Interval(e) => e.is_bottom(),
            AnyEnv::Affine(e) => e.is_bottom(),
            AnyEnv::Quad(e) => e.is_bottom(),
        }
    }

    pub fn to_bottom(&self) -> AnyEnv {
        match self {
            AnyEnv::Interval(e) => AnyEnv::Interval(e.to_bottom()),
            AnyEnv::Affine(e) => AnyEnv::Affine(e.to_bottom()),
            AnyEnv::Quad(e) => AnyEnv::Quad(e.to_bottom()),
        }
    }

    pub fn assign(
        &self,
        k: &str,
        e: &Expr,
        cfg: &EvalSettings,
        notes: &mut Vec<EvalNote>,
    ) -> Result<AnyEnv, DomainError> {
        Ok(match self {
            AnyEnv::Interval(env) => AnyEnv::Interval(env.assign(k, e, cfg, notes)?),
            AnyEnv::Affine(env) => AnyEnv::Affine(env.assign(k, e, cfg, notes)?),
            AnyEnv::Quad(env) => AnyEnv::Quad(env.assign(k, e, cfg, notes)?),
        })
    }

    pub fn guard(
        &self,
        rel: &RelExpr,
        cfg: &EvalSettings,
        notes: &mut Vec<EvalNote>,
    ) -> Result<AnyEnv, DomainError> {
        Ok(match self {
            AnyEnv::Interval(env) => AnyEnv::Interval(env.guard(rel, cfg, notes)?),
            AnyEnv::Affine(env) => AnyEnv::Affine(env.guard(rel, cfg, notes)?),
            AnyEnv::Quad(env) => AnyEnv::Quad(env.guard(rel, cfg, notes)?),
        })
    }

    pub fn join(&self, other: &AnyEnv, cfg: &EvalSettings) -> Result<AnyEnv, DomainError> {
        Ok(match (self, other) {
            (AnyEnv::Interval(a), AnyEnv::Interval(b)) => AnyEnv::Interval(a.join(b)?),
            (AnyEnv::Affine(a), AnyEnv::Affine(b)) => AnyEnv::Affine(a.join(b)?),
            (AnyEnv::Quad(a), AnyEnv::Quad(b)) => AnyEnv::Quad(a.join(b, cfg)?),
            _ => panic!("join of environments from different backends"),
        })
    }

    pub fn meet(&self, other: &AnyEnv, cfg: &EvalSettings) -> Result<AnyEnv, DomainError> {
        Ok(match (self, other) {
            (AnyEnv::Interval(a), AnyEnv::Interval(b)) => AnyEnv::Interval(a.meet(b)?),
            (AnyEnv::Affine(a), AnyEnv::Affine(b)) => AnyEnv::Affine(a.meet(b)?),
            (AnyEnv::Quad(a), AnyEnv::Quad(b)) => AnyEnv::Quad(a.meet(b, cfg)?),
            _ => panic!("meet of environments from different backends"),
        })
    }

    /// Per-variable bounds; `conc` selects the concretization for the
    /// quadratic backend and is ignored by the others.
    pub fn box_bounds(&self, conc: Concretization) -> Option<VarBox> {
        match self {
            AnyEnv::Interval(e) => e.box_bounds(),
            AnyEnv::Affine(e) => e.box_bounds(),
            AnyEnv::Quad(e) => e.box_bounds(conc),
        }
    }
}
