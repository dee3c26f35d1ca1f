//! Variable environments over quadratic forms.
//!
//! A [`QuadVector`] maps program variables to [`DomainValue`]s whose forms
//! share one noise-symbol registry, so relations between variables (common
//! symbols) survive across assignments. Environments are immutable
//! snapshots: every operation returns a new one.
//!
//! An environment is *bottom* (unreachable) exactly when all of its bindings
//! are `Bottom`; operations never produce a mix, because one empty component
//! empties the whole concretization.

use std::sync::Arc;

use qz_forms::{BandError, ExtInterval, Interval, NoiseRegistry, QuadForm};

use crate::expr::{BinOp, Expr};
use crate::value::{Concretization, DomainError, DomainValue, EvalNote, EvalSettings};

/// Per-variable interval bounds, in environment (insertion) order.
pub type VarBox = Vec<(String, ExtInterval)>;

/// True iff every interval of `a` is contained in the same-named interval
/// of `b`. Boxes over different variable sets are never ordered.
pub fn box_leq(a: &VarBox, b: &VarBox) -> bool {
    if a.len() != b.len() {
        return false;
    }
    a.iter().all(|(name, ia)| {
        b.iter()
            .find(|(n, _)| n == name)
            .is_some_and(|(_, ib)| ib.encloses(ia))
    })
}

/// An ordered map from variable names to abstract values, with the shared
/// symbol registry the values draw from.
#[derive(Debug, Clone)]
pub struct QuadVector {
    registry: Arc<NoiseRegistry>,
    vars: Vec<(String, DomainValue)>,
}

impl QuadVector {
    /// An empty environment drawing symbols from `registry`.
    pub fn new(registry: Arc<NoiseRegistry>) -> QuadVector {
        QuadVector {
            registry,
            vars: Vec::new(),
        }
    }

    /// An empty environment with its own fresh registry.
    pub fn with_fresh_registry() -> QuadVector {
        Self::new(Arc::new(NoiseRegistry::new()))
    }

    pub fn registry(&self) -> &NoiseRegistry {
        &self.registry
    }

    pub(crate) fn registry_handle(&self) -> Arc<NoiseRegistry> {
        Arc::clone(&self.registry)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Bound variables with their values, in insertion order.
    pub fn bindings(&self) -> impl Iterator<Item = (&str, &DomainValue)> {
        self.vars.iter().map(|(n, v)| (n.as_str(), v))
    }

    pub(crate) fn get(&self, name: &str) -> Option<&DomainValue> {
        self.vars.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// The value bound to `name`.
    pub fn project(&self, name: &str) -> Result<&DomainValue, DomainError> {
        self.get(name)
            .ok_or_else(|| DomainError::Unbound(name.to_string()))
    }

    /// Binds `name` to `value`, keeping its position when already bound and
    /// appending otherwise.
    pub fn bind(&mut self, name: &str, value: DomainValue) {
        match self.vars.iter_mut().find(|(n, _)| n == name) {
            Some((_, slot)) => *slot = value,
            None => self.vars.push((name.to_string(), value)),
        }
    }

    /// True when the environment denotes no concrete state.
    pub fn is_bottom(&self) -> bool {
        self.vars.iter().any(|(_, v)| v.is_bottom())
    }

    /// The same variable set, every binding `Bottom`.
    pub fn to_bottom(&self) -> QuadVector {
        QuadVector {
            registry: Arc::clone(&self.registry),
            vars: self
                .vars
                .iter()
                .map(|(n, _)| (n.clone(), DomainValue::Bottom))
                .collect(),
        }
    }

    /// Normalizes a possibly-mixed environment: any `Bottom` binding makes
    /// the whole environment bottom.
    fn normalized(self) -> QuadVector {
        if self.is_bottom() {
            self.to_bottom()
        } else {
            self
        }
    }

    /// Structural recursion over `e`. Partial operations that fail (division
    /// by a range containing zero, √ of an entirely negative range,
    /// coefficient overflow) yield `Top` and push a note; an unbound
    /// variable is an error.
    pub fn eval_expr(
        &self,
        e: &Expr,
        cfg: &EvalSettings,
        notes: &mut Vec<EvalNote>,
    ) -> Result<DomainValue, DomainError> {
        Ok(match e {
            Expr::Const { value, conv_err } => {
                let err = if cfg.fp { *conv_err } else { 0.0 };
                match QuadForm::new(*value, [], [], err, 0.0, 0.0) {
                    Ok(q) => DomainValue::Form(q),
                    Err(_) => {
                        notes.push(EvalNote::RangeOverflow);
                        DomainValue::Top
                    }
                }
            }
            Expr::Range { lo, hi } => match Interval::new(*lo, *hi) {
                Ok(i) => DomainValue::Form(QuadForm::from_interval(i, &self.registry)),
                Err(_) => {
                    notes.push(EvalNote::RangeOverflow);
                    DomainValue::Top
                }
            },
            Expr::Var(name) => self.project(name)?.clone(),
            Expr::Neg(inner) => match self.eval_expr(inner, cfg, notes)? {
                DomainValue::Form(q) => DomainValue::Form(q.neg()),
                other => other,
            },
            Expr::Sqrt(inner) => match self.eval_expr(inner, cfg, notes)? {
                DomainValue::Form(q) => match q.sqrt(&self.registry) {
                    Ok(r) => DomainValue::Form(r),
                    Err(BandError::SqrtNegative(..)) => {
                        notes.push(EvalNote::SqrtOfNegative);
                        DomainValue::Top
                    }
                    Err(_) => {
                        notes.push(EvalNote::RangeOverflow);
                        DomainValue::Top
                    }
                },
                other => other,
            },
            Expr::Bin { op, lhs, rhs } => {
                let a = self.eval_expr(lhs, cfg, notes)?;
                let b = self.eval_expr(rhs, cfg, notes)?;
                self.apply_bin(*op, a, b, notes)
            }
        })
    }

    fn apply_bin(
        &self,
        op: BinOp,
        a: DomainValue,
        b: DomainValue,
        notes: &mut Vec<EvalNote>,
    ) -> DomainValue {
        use DomainValue::{Bottom, Form, Top};
        let (qa, qb) = match (a, b) {
            (Bottom, _) | (_, Bottom) => return Bottom,
            (Top, _) | (_, Top) => return Top,
            (Form(qa), Form(qb)) => (qa, qb),
        };
        let result = match op {
            BinOp::Add => qa.add(&qb),
            BinOp::Sub => qa.sub(&qb),
            BinOp::Mul => qa.mul(&qb),
            BinOp::Div => match qb.recip(&self.registry) {
                Ok(inv) => qa.mul(&inv),
                Err(BandError::RecipThroughZero(..)) => {
                    notes.push(EvalNote::DivisorMayBeZero);
                    return Top;
                }
                Err(_) => {
                    notes.push(EvalNote::RangeOverflow);
                    return Top;
                }
            },
        };
        match result {
            Ok(q) => Form(q),
            Err(_) => {
                notes.push(EvalNote::RangeOverflow);
                Top
            }
        }
    }

    /// Rebinds `k` to the value of `e`; every other binding is carried over
    /// untouched, so shared symbols keep relating the variables.
    pub fn assign(
        &self,
        k: &str,
        e: &Expr,
        cfg: &EvalSettings,
        notes: &mut Vec<EvalNote>,
    ) -> Result<QuadVector, DomainError> {
        let v = self.eval_expr(e, cfg, notes)?;
        let mut out = self.clone();
        out.bind(k, v);
        Ok(out.normalized())
    }

    /// Per-variable interval bounds under `conc`; `None` when the
    /// environment is bottom (no concrete state to bound).
    pub fn box_bounds(&self, conc: Concretization) -> Option<VarBox> {
        self.vars
            .iter()
            .map(|(n, v)| Some((n.clone(), v.range(conc)?)))
            .collect()
    }
}
