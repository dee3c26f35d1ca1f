//! Environment join and meet.
//!
//! The join keeps, per variable, the part two forms agree on — componentwise
//! [`argmin`] over centers replaced by the midpoint of the range hull — and
//! abstracts everything else into one fresh symbol sized by the hull of the
//! operands' residual ranges. The meet falls back to interval precision:
//! ranges are intersected and re-abstracted, except that a variable bound to
//! the same form on both sides passes through untouched.

use qz_forms::{NoiseRegistry, QuadForm};

use crate::env::QuadVector;
use crate::value::{DomainError, DomainValue, EvalSettings};

/// The shared-sign value of smaller magnitude, or zero when the signs
/// differ. This is the coefficient fusion rule of the join.
pub fn argmin(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 || (a < 0.0) != (b < 0.0) {
        0.0
    } else if a.abs() <= b.abs() {
        a
    } else {
        b
    }
}

/// Re-indexing of a form into a symbol space extended to `target_linear`
/// linear and `target_quad` quadratic symbols.
///
/// Forms here are sparse over globally-identified symbols, so the extension
/// is the identity on the representation (absent symbols already read as
/// zero); it is kept as an explicit step so the join mirrors its definition,
/// and because extension never changes a form's range.
pub fn extend(q: &QuadForm, _target_linear: usize, _target_quad: usize) -> QuadForm {
    q.clone()
}

/// The decomposition a per-variable join produces: the fused form, the
/// fresh-symbol residual, and their sum. The box of `result` is the
/// Minkowski sum of the boxes of `combined` and `residual` (up to
/// rounding), which is what makes the join's precision analyzable.
#[derive(Debug, Clone)]
pub struct JoinParts {
    /// `q″`: argmin-fused coefficients around the hull midpoint.
    pub combined: QuadForm,
    /// One fresh symbol covering both operands' deviation from `q″`.
    pub residual: QuadForm,
    /// `combined + residual`, the joined form.
    pub result: QuadForm,
}

/// Joins two forms; `None` when a range or coefficient leaves the finite
/// domain (the caller widens to `Top`).
pub fn join_q(
    x: &QuadForm,
    y: &QuadForm,
    cfg: &EvalSettings,
    reg: &NoiseRegistry,
) -> Option<JoinParts> {
    let hull = cfg.conc.range(x).hull(&cfg.conc.range(y)).bounded()?;

    let mut linear = Vec::new();
    for sym in x.plain_symbols().union(&y.plain_symbols()) {
        linear.push((*sym, argmin(x.linear_coeff(*sym), y.linear_coeff(*sym))));
    }
    let mut quad = Vec::new();
    let pairs: std::collections::BTreeSet<_> =
        x.quad().keys().chain(y.quad().keys()).copied().collect();
    for (i, j) in pairs {
        quad.push(((i, j), argmin(x.quad_coeff(i, j), y.quad_coeff(i, j))));
    }
    let combined = extend(
        &QuadForm::new(
            hull.mid(),
            linear,
            quad,
            argmin(x.sym_err(), y.sym_err()),
            argmin(x.pos_err(), y.pos_err()),
            argmin(x.neg_err(), y.neg_err()),
        )
        .ok()?,
        0,
        0,
    );

    let dev_x = cfg.conc.range(&x.sub(&combined).ok()?);
    let dev_y = cfg.conc.range(&y.sub(&combined).ok()?);
    let residual = QuadForm::from_interval(dev_x.hull(&dev_y).bounded()?, reg);
    let result = combined.add(&residual).ok()?;
    Some(JoinParts {
        combined,
        residual,
        result,
    })
}

fn join_values(
    x: &DomainValue,
    y: &DomainValue,
    cfg: &EvalSettings,
    reg: &NoiseRegistry,
) -> DomainValue {
    use DomainValue::{Bottom, Form, Top};
    match (x, y) {
        (Bottom, v) | (v, Bottom) => v.clone(),
        (Top, _) | (_, Top) => Top,
        (Form(a), Form(b)) => match join_q(a, b, cfg, reg) {
            Some(parts) => Form(parts.result),
            None => Top,
        },
    }
}

/// Re-abstraction of the intersection of two forms' ranges, on one fresh
/// symbol. `Bottom` when the ranges are disjoint.
pub fn meet_q(
    x: &QuadForm,
    y: &QuadForm,
    cfg: &EvalSettings,
    reg: &NoiseRegistry,
) -> DomainValue {
    match cfg.conc.range(x).intersect(&cfg.conc.range(y)) {
        None => DomainValue::Bottom,
        Some(i) => match i.bounded() {
            Some(b) => DomainValue::Form(QuadForm::from_interval(b, reg)),
            None => DomainValue::Top,
        },
    }
}

fn meet_values(
    x: &DomainValue,
    y: &DomainValue,
    cfg: &EvalSettings,
    reg: &NoiseRegistry,
) -> DomainValue {
    use DomainValue::{Bottom, Form, Top};
    if x == y {
        return x.clone();
    }
    match (x, y) {
        (Bottom, _) | (_, Bottom) => Bottom,
        (Top, v) | (v, Top) => v.clone(),
        (Form(a), Form(b)) => meet_q(a, b, cfg, reg),
    }
}

fn zip_same_vars<'a>(
    x: &'a QuadVector,
    y: &'a QuadVector,
) -> Result<Vec<(&'a str, &'a DomainValue, &'a DomainValue)>, DomainError> {
    if let Some((name, _)) = y.bindings().find(|(n, _)| x.project(n).is_err()) {
        return Err(DomainError::VarSetMismatch(name.to_string()));
    }
    x.bindings()
        .map(|(name, vx)| match y.project(name) {
            Ok(vy) => Ok((name, vx, vy)),
            Err(_) => Err(DomainError::VarSetMismatch(name.to_string())),
        })
        .collect()
}

impl QuadVector {
    /// Per-variable upper bound of two environments over the same variable
    /// set, in `self`'s binding order.
    pub fn join(&self, other: &QuadVector, cfg: &EvalSettings) -> Result<QuadVector, DomainError> {
        let reg = self.registry_handle();
        let mut out = QuadVector::new(self.registry_handle());
        for (name, vx, vy) in zip_same_vars(self, other)? {
            out.bind(name, join_values(vx, vy, cfg, &reg));
        }
        Ok(out)
    }

    /// Per-variable meet; a variable bound to structurally equal values on
    /// both sides keeps them verbatim (preserving relational information),
    /// and one empty component empties the whole environment.
    pub fn meet(&self, other: &QuadVector, cfg: &EvalSettings) -> Result<QuadVector, DomainError> {
        let reg = self.registry_handle();
        let mut out = QuadVector::new(self.registry_handle());
        for (name, vx, vy) in zip_same_vars(self, other)? {
            let v = meet_values(vx, vy, cfg, &reg);
            out.bind(name, v);
        }
        if out.is_bottom() {
            out = out.to_bottom();
        }
        Ok(out)
    }
}
