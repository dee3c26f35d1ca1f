//! Quadratic noise-symbol forms and their sound arithmetic.
//!
//! A form `q = c + Σᵢ bᵢεᵢ + Σ_{i≤j} aᵢⱼεᵢεⱼ + c±ε± + c₊ε₊ + c₋ε₋` denotes
//! the set of reals obtained by letting the plain symbols `εᵢ` range over
//! `[−1, 1]`, `ε±` over `[−1, 1]`, `ε₊` over `[0, 1]` and `ε₋` over `[−1, 0]`.
//! Plain symbols are shared between forms and carry correlations; the three
//! error slots are local to each form and absorb nonlinear remainders and
//! rounding error.
//!
//! Soundness discipline: every operation accounts for its own floating-point
//! rounding via error-free transformations, accumulating the residual
//! magnitudes (rounded upward) into the symmetric slot `c±`. Concretization
//! rounds outward. Consequently the concretization of an operation result
//! always encloses the exact real-arithmetic image of the operands'
//! concretizations — including the rounding committed by the operation
//! itself.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::eft::{product_err_mag, two_product, two_sum};
use crate::interval::{ExtInterval, Interval};
use crate::minrange::{min_range_band, BandError, UnaryFn};
use crate::registry::{NoiseRegistry, NoiseSym};
use crate::round::{add_down, add_up, mul_down, mul_up};

/// Errors from form construction or arithmetic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormError {
    #[error("form coefficients overflowed the representable range")]
    Overflow,
    #[error("form coefficients must not be NaN")]
    Nan,
    #[error("error-slot weights must be nonnegative, got {0}")]
    NegativeSlot(f64),
}

/// Accumulator of rounding-error magnitudes; every step rounds up, so the
/// total dominates the exact sum of magnitudes.
#[derive(Debug, Default)]
struct ErrUp(f64);

impl ErrUp {
    fn add(&mut self, mag: f64) {
        self.0 = add_up(self.0, mag);
    }

    fn add_product_err(&mut self, p: f64, e: f64) {
        self.add(product_err_mag(p, e));
    }

    fn total(&self) -> f64 {
        self.0
    }
}

/// A quadratic noise-symbol form.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadForm {
    center: f64,
    linear: BTreeMap<NoiseSym, f64>,
    /// Canonical keys `(i, j)` with `i ≤ j`; the stored value is the full
    /// coefficient of the monomial `εᵢεⱼ`.
    quad: BTreeMap<(NoiseSym, NoiseSym), f64>,
    /// Weight of the symmetric error slot `ε± ∈ [−1, 1]`; nonnegative.
    sym_err: f64,
    /// Weight of the one-sided slot `ε₊ ∈ [0, 1]`; nonnegative.
    pos_err: f64,
    /// Weight of the one-sided slot `ε₋ ∈ [−1, 0]`; nonnegative.
    neg_err: f64,
}

/// Routes a bounded range into the one-sided error slots.
///
/// Returns `(pos, neg)` with `pos, neg ≥ 0` and `[−neg, pos] ⊇ [lo, hi]`;
/// the symmetric slot is not involved.
pub fn route_range_to_slots(lo: f64, hi: f64) -> (f64, f64) {
    debug_assert!(lo <= hi, "range out of order: [{lo}, {hi}]");
    (hi.max(0.0), (-lo).max(0.0))
}

impl QuadForm {
    /// The zero form.
    pub fn zero() -> Self {
        QuadForm {
            center: 0.0,
            linear: BTreeMap::new(),
            quad: BTreeMap::new(),
            sym_err: 0.0,
            pos_err: 0.0,
            neg_err: 0.0,
        }
    }

    /// A constant form `c`.
    pub fn constant(c: f64) -> Result<Self, FormError> {
        if c.is_nan() {
            return Err(FormError::Nan);
        }
        if !c.is_finite() {
            return Err(FormError::Overflow);
        }
        let mut q = Self::zero();
        q.center = c;
        Ok(q)
    }

    /// Builds a form from explicit components, canonicalizing term order,
    /// folding duplicate monomials, and pruning zero coefficients.
    pub fn new(
        center: f64,
        linear: impl IntoIterator<Item = (NoiseSym, f64)>,
        quad: impl IntoIterator<Item = ((NoiseSym, NoiseSym), f64)>,
        sym_err: f64,
        pos_err: f64,
        neg_err: f64,
    ) -> Result<Self, FormError> {
        for s in [sym_err, pos_err, neg_err] {
            if s.is_nan() {
                return Err(FormError::Nan);
            }
            if s < 0.0 {
                return Err(FormError::NegativeSlot(s));
            }
        }
        let mut lin = BTreeMap::new();
        for (k, v) in linear {
            if v.is_nan() {
                return Err(FormError::Nan);
            }
            let c = lin.entry(k).or_insert(0.0);
            *c += v;
        }
        lin.retain(|_, v| *v != 0.0);
        let mut qd = BTreeMap::new();
        for ((i, j), v) in quad {
            if v.is_nan() {
                return Err(FormError::Nan);
            }
            let key = if i <= j { (i, j) } else { (j, i) };
            let c = qd.entry(key).or_insert(0.0);
            *c += v;
        }
        qd.retain(|_, v| *v != 0.0);
        Self::finish(center, lin, qd, sym_err, pos_err, neg_err)
    }

    /// Abstraction of a finite interval: `mid + radius·ε_fresh`, where the
    /// radius is rounded up so the concretization encloses the input. A
    /// point interval yields a bare constant (no symbol is allocated).
    pub fn from_interval(i: Interval, reg: &NoiseRegistry) -> QuadForm {
        let mid = i.mid();
        let rad = i.radius_up();
        let mut linear = BTreeMap::new();
        if rad > 0.0 {
            linear.insert(reg.fresh(), rad);
        }
        QuadForm {
            center: mid,
            linear,
            quad: BTreeMap::new(),
            sym_err: 0.0,
            pos_err: 0.0,
            neg_err: 0.0,
        }
    }

    fn finish(
        center: f64,
        linear: BTreeMap<NoiseSym, f64>,
        quad: BTreeMap<(NoiseSym, NoiseSym), f64>,
        sym_err: f64,
        pos_err: f64,
        neg_err: f64,
    ) -> Result<Self, FormError> {
        let coeffs_finite = center.is_finite()
            && sym_err.is_finite()
            && pos_err.is_finite()
            && neg_err.is_finite()
            && linear.values().all(|v| v.is_finite())
            && quad.values().all(|v| v.is_finite());
        if !coeffs_finite {
            return Err(FormError::Overflow);
        }
        debug_assert!(sym_err >= 0.0 && pos_err >= 0.0 && neg_err >= 0.0);
        debug_assert!(quad.keys().all(|(i, j)| i <= j));
        Ok(QuadForm {
            center,
            linear,
            quad,
            sym_err,
            pos_err,
            neg_err,
        })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn linear(&self) -> &BTreeMap<NoiseSym, f64> {
        &self.linear
    }

    pub fn quad(&self) -> &BTreeMap<(NoiseSym, NoiseSym), f64> {
        &self.quad
    }

    pub fn linear_coeff(&self, s: NoiseSym) -> f64 {
        self.linear.get(&s).copied().unwrap_or(0.0)
    }

    pub fn quad_coeff(&self, i: NoiseSym, j: NoiseSym) -> f64 {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.quad.get(&key).copied().unwrap_or(0.0)
    }

    pub fn sym_err(&self) -> f64 {
        self.sym_err
    }

    pub fn pos_err(&self) -> f64 {
        self.pos_err
    }

    pub fn neg_err(&self) -> f64 {
        self.neg_err
    }

    /// Plain symbols occurring in the linear or quadratic part.
    pub fn plain_symbols(&self) -> BTreeSet<NoiseSym> {
        let mut out: BTreeSet<NoiseSym> = self.linear.keys().copied().collect();
        for &(i, j) in self.quad.keys() {
            out.insert(i);
            out.insert(j);
        }
        out
    }

    /// True when the form is a bare constant: no symbols, no error slots.
    pub fn is_constant(&self) -> bool {
        self.linear.is_empty()
            && self.quad.is_empty()
            && self.sym_err == 0.0
            && self.pos_err == 0.0
            && self.neg_err == 0.0
    }

    pub fn has_quad_terms(&self) -> bool {
        !self.quad.is_empty()
    }

    /// Interval concretization by magnitude-and-sign bookkeeping: linear and
    /// off-diagonal terms contribute symmetrically, square terms one-sidedly
    /// (εᵢ² ∈ [0, 1]), and the error slots per their ranges. Endpoints are
    /// accumulated with outward rounding, so the result encloses the exact
    /// range bound.
    pub fn concretize_mt(&self) -> ExtInterval {
        let mut lo = self.center;
        let mut hi = self.center;
        for &b in self.linear.values() {
            lo = add_down(lo, -b.abs());
            hi = add_up(hi, b.abs());
        }
        for (&(i, j), &a) in &self.quad {
            if i == j {
                if a < 0.0 {
                    lo = add_down(lo, a);
                } else {
                    hi = add_up(hi, a);
                }
            } else {
                lo = add_down(lo, -a.abs());
                hi = add_up(hi, a.abs());
            }
        }
        lo = add_down(lo, -self.sym_err);
        lo = add_down(lo, -self.neg_err);
        hi = add_up(hi, self.sym_err);
        hi = add_up(hi, self.pos_err);
        ExtInterval::new(lo, hi).expect("bounds only move outward from the center")
    }

    /// Sum of two forms. Components add over the union of symbol supports;
    /// all rounding residuals are folded into the symmetric error slot.
    pub fn add(&self, other: &QuadForm) -> Result<QuadForm, FormError> {
        let mut err = ErrUp::default();
        let (center, e) = two_sum(self.center, other.center);
        err.add(e.abs());
        let linear = merge_maps(&self.linear, &other.linear, &mut err);
        let quad = merge_maps(&self.quad, &other.quad, &mut err);
        let (pos_err, e) = two_sum(self.pos_err, other.pos_err);
        err.add(e.abs());
        let (neg_err, e) = two_sum(self.neg_err, other.neg_err);
        err.add(e.abs());
        let (pm, e) = two_sum(self.sym_err, other.sym_err);
        err.add(e.abs());
        let sym_err = add_up(pm, err.total());
        Self::finish(center, linear, quad, sym_err, pos_err, neg_err)
    }

    pub fn sub(&self, other: &QuadForm) -> Result<QuadForm, FormError> {
        self.add(&other.neg())
    }

    /// Negation. Exact: coefficients flip sign and the one-sided slots swap
    /// roles (`−ε₊` ranges over `[−1, 0]` and vice versa).
    pub fn neg(&self) -> QuadForm {
        QuadForm {
            center: -self.center,
            linear: self.linear.iter().map(|(&k, &v)| (k, -v)).collect(),
            quad: self.quad.iter().map(|(&k, &v)| (k, -v)).collect(),
            sym_err: self.sym_err,
            pos_err: self.neg_err,
            neg_err: self.pos_err,
        }
    }

    /// Multiplication by a scalar. Slots scale by `|k|` and swap roles when
    /// `k < 0`; rounding residuals (including the center's) are folded into
    /// the symmetric slot.
    pub fn scale(&self, k: f64) -> Result<QuadForm, FormError> {
        if k.is_nan() {
            return Err(FormError::Nan);
        }
        if !k.is_finite() {
            return Err(FormError::Overflow);
        }
        if k == 0.0 {
            return Ok(QuadForm::zero());
        }
        let mut err = ErrUp::default();
        let (center, e) = two_product(k, self.center);
        err.add_product_err(center, e);
        let linear = scale_map(k, &self.linear, &mut err);
        let quad = scale_map(k, &self.quad, &mut err);
        let (pm, pos, neg) = scale_slots(k, self.sym_err, self.pos_err, self.neg_err, &mut err);
        let sym_err = add_up(pm, err.total());
        Self::finish(center, linear, quad, sym_err, pos, neg)
    }

    /// Product of two forms.
    ///
    /// The exact part is `(cc′, c·b′ + c′·b, c·A′ + c′·A + b b′ᵀ)`. The
    /// operands' error slots times the opposite center are kept exact with
    /// sign-aware slot scaling. Every term of degree > 2 — linear×quadratic,
    /// quadratic×quadratic, and error slots times non-constant parts — is
    /// bounded by outward interval arithmetic over the factors' ranges and
    /// routed into the one-sided slots.
    pub fn mul(&self, other: &QuadForm) -> Result<QuadForm, FormError> {
        if self.is_constant() {
            return other.scale(self.center);
        }
        if other.is_constant() {
            return self.scale(other.center);
        }
        let (x, y) = (self, other);
        let mut err = ErrUp::default();

        let (center, e) = two_product(x.center, y.center);
        err.add_product_err(center, e);

        let lin_x = scale_map(y.center, &x.linear, &mut err);
        let lin_y = scale_map(x.center, &y.linear, &mut err);
        let linear = merge_maps(&lin_x, &lin_y, &mut err);

        let quad_x = scale_map(y.center, &x.quad, &mut err);
        let quad_y = scale_map(x.center, &y.quad, &mut err);
        let mut quad = merge_maps(&quad_x, &quad_y, &mut err);
        for (&i, &bi) in &x.linear {
            for (&j, &bj) in &y.linear {
                let (p, e) = two_product(bi, bj);
                err.add_product_err(p, e);
                let key = if i <= j { (i, j) } else { (j, i) };
                match quad.entry(key) {
                    Entry::Occupied(mut o) => {
                        let (s, e) = two_sum(*o.get(), p);
                        err.add(e.abs());
                        if s == 0.0 {
                            o.remove();
                        } else {
                            *o.get_mut() = s;
                        }
                    }
                    Entry::Vacant(v) => {
                        if p != 0.0 {
                            v.insert(p);
                        }
                    }
                }
            }
        }

        let (pm_x, pos_x, neg_x) = scale_slots(y.center, x.sym_err, x.pos_err, x.neg_err, &mut err);
        let (pm_y, pos_y, neg_y) = scale_slots(x.center, y.sym_err, y.pos_err, y.neg_err, &mut err);
        let (pm, e) = two_sum(pm_x, pm_y);
        err.add(e.abs());
        let (mut pos, e) = two_sum(pos_x, pos_y);
        err.add(e.abs());
        let (mut neg, e) = two_sum(neg_x, neg_y);
        err.add(e.abs());

        // Degree > 2 remainder over the factor group ranges
        // L = [−Σ|bᵢ|, Σ|bᵢ|], Q = range of the quadratic part,
        // E = range of the error slots.
        let lx = x.linear_range();
        let ly = y.linear_range();
        let qx = x.quad_range();
        let qy = y.quad_range();
        let ex = x.slot_range();
        let ey = y.slot_range();
        let r = lx
            .mul(&qy)
            .add(&ly.mul(&qx))
            .add(&qx.mul(&qy))
            .add(&ex.mul(&ly.add(&qy).add(&ey)))
            .add(&ey.mul(&lx.add(&qx)));
        let (dpos, dneg) = route_range_to_slots(r.lo(), r.hi());
        pos = add_up(pos, dpos);
        neg = add_up(neg, dneg);

        let sym_err = add_up(pm, err.total());
        Self::finish(center, linear, quad, sym_err, pos, neg)
    }

    /// Range `[−Σ|bᵢ|, Σ|bᵢ|]` of the linear part, rounded outward.
    fn linear_range(&self) -> ExtInterval {
        let mut s = 0.0;
        for &b in self.linear.values() {
            s = add_up(s, b.abs());
        }
        ExtInterval::new(-s, s).expect("symmetric range")
    }

    /// Range of the quadratic part: diagonal terms contribute one-sidedly
    /// (εᵢ² ∈ [0, 1]), off-diagonal terms symmetrically.
    fn quad_range(&self) -> ExtInterval {
        let mut lo = 0.0;
        let mut hi = 0.0;
        for (&(i, j), &a) in &self.quad {
            if i == j {
                if a < 0.0 {
                    lo = add_down(lo, a);
                } else {
                    hi = add_up(hi, a);
                }
            } else {
                lo = add_down(lo, -a.abs());
                hi = add_up(hi, a.abs());
            }
        }
        ExtInterval::new(lo, hi).expect("range straddles zero")
    }

    /// Range `[−c₋ − c±, c₊ + c±]` of the error slots, rounded outward.
    fn slot_range(&self) -> ExtInterval {
        let lo = add_down(-self.neg_err, -self.sym_err);
        let hi = add_up(self.pos_err, self.sym_err);
        ExtInterval::new(lo, hi).expect("range straddles zero")
    }

    /// Reciprocal via a minimum-range linear band over the form's box:
    /// `slope·q + offset + radius·ε_fresh`, whose concretization encloses
    /// `1/v` for every `v` in the box. The box must not contain zero.
    pub fn recip(&self, reg: &NoiseRegistry) -> Result<QuadForm, BandError> {
        let range = self.concretize_mt();
        if range.contains(0.0) {
            return Err(BandError::RecipThroughZero(range.lo(), range.hi()));
        }
        let dom = range
            .bounded()
            .ok_or(BandError::Overflow(range.lo(), range.hi()))?;
        self.apply_band(UnaryFn::Recip, dom, reg)
    }

    /// Square root via a minimum-range linear band over the nonnegative part
    /// of the form's box. Values below zero are outside √'s domain, so the
    /// band is fitted to the clipped box; a box entirely below zero is an
    /// error.
    pub fn sqrt(&self, reg: &NoiseRegistry) -> Result<QuadForm, BandError> {
        let range = self.concretize_mt();
        let dom = range
            .intersect(&ExtInterval::at_least(0.0))
            .ok_or(BandError::SqrtNegative(range.lo(), range.hi()))?
            .bounded()
            .ok_or(BandError::Overflow(range.lo(), range.hi()))?;
        self.apply_band(UnaryFn::Sqrt, dom, reg)
    }

    fn apply_band(
        &self,
        f: UnaryFn,
        dom: Interval,
        reg: &NoiseRegistry,
    ) -> Result<QuadForm, BandError> {
        let band = min_range_band(f, dom)?;
        let overflow = |_| BandError::Overflow(dom.lo(), dom.hi());
        let scaled = self.scale(band.slope).map_err(overflow)?;
        let residual: Vec<(NoiseSym, f64)> = if band.radius > 0.0 {
            vec![(reg.fresh(), band.radius)]
        } else {
            Vec::new()
        };
        let shift = QuadForm::new(band.offset, residual, [], 0.0, 0.0, 0.0).map_err(overflow)?;
        scaled.add(&shift).map_err(overflow)
    }

    /// Directed bounds on the form's value at a concrete noise assignment:
    /// the exact real value lies within the returned `[lo, hi]`.
    pub fn eval_bounds(&self, t: &NoisePoint) -> (f64, f64) {
        let mut lo = self.center;
        let mut hi = self.center;
        let mut term = |c: f64, f_dn: f64, f_up: f64| {
            let t_dn = mul_down(c, f_dn).min(mul_down(c, f_up));
            let t_up = mul_up(c, f_dn).max(mul_up(c, f_up));
            lo = add_down(lo, t_dn);
            hi = add_up(hi, t_up);
        };
        for (s, &b) in &self.linear {
            let v = t.value(*s);
            term(b, v, v);
        }
        for (&(i, j), &a) in &self.quad {
            let vi = t.value(i);
            let vj = t.value(j);
            term(a, mul_down(vi, vj), mul_up(vi, vj));
        }
        term(self.sym_err, t.sym, t.sym);
        term(self.pos_err, t.pos, t.pos);
        term(self.neg_err, t.neg, t.neg);
        (lo, hi)
    }
}

/// A concrete assignment of noise symbols, for evaluation oracles.
///
/// Plain symbols not present in the map read as 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NoisePoint {
    pub plain: BTreeMap<NoiseSym, f64>,
    /// Value of `ε± ∈ [−1, 1]`.
    pub sym: f64,
    /// Value of `ε₊ ∈ [0, 1]`.
    pub pos: f64,
    /// Value of `ε₋ ∈ [−1, 0]`.
    pub neg: f64,
}

impl NoisePoint {
    pub fn value(&self, s: NoiseSym) -> f64 {
        self.plain.get(&s).copied().unwrap_or(0.0)
    }

    /// Checks that every component is inside its admissible range.
    pub fn in_range(&self) -> bool {
        self.plain.values().all(|v| (-1.0..=1.0).contains(v))
            && (-1.0..=1.0).contains(&self.sym)
            && (0.0..=1.0).contains(&self.pos)
            && (-1.0..=0.0).contains(&self.neg)
    }
}

fn merge_maps<K: Ord + Copy>(
    a: &BTreeMap<K, f64>,
    b: &BTreeMap<K, f64>,
    err: &mut ErrUp,
) -> BTreeMap<K, f64> {
    let mut out = a.clone();
    for (&k, &vb) in b {
        match out.entry(k) {
            Entry::Occupied(mut o) => {
                let (s, e) = two_sum(*o.get(), vb);
                err.add(e.abs());
                if s == 0.0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            Entry::Vacant(v) => {
                v.insert(vb);
            }
        }
    }
    out
}

fn scale_map<K: Ord + Copy>(k: f64, m: &BTreeMap<K, f64>, err: &mut ErrUp) -> BTreeMap<K, f64> {
    let mut out = BTreeMap::new();
    if k == 0.0 {
        return out;
    }
    for (&key, &v) in m {
        let (p, e) = two_product(k, v);
        err.add_product_err(p, e);
        if p != 0.0 {
            out.insert(key, p);
        }
    }
    out
}

/// Scales the error-slot triple by `|k|`, swapping the one-sided slots when
/// `k < 0`; rounding residuals go to `err`.
fn scale_slots(k: f64, pm: f64, pos: f64, neg: f64, err: &mut ErrUp) -> (f64, f64, f64) {
    let m = k.abs();
    let (pm2, e) = two_product(m, pm);
    err.add_product_err(pm2, e);
    let (pos2, e) = two_product(m, pos);
    err.add_product_err(pos2, e);
    let (neg2, e) = two_product(m, neg);
    err.add_product_err(neg2, e);
    if k < 0.0 {
        (pm2, neg2, pos2)
    } else {
        (pm2, pos2, neg2)
    }
}

impl fmt::Display for QuadForm {
    /// Prints in the textual form syntax accepted by [`crate::parse_form`],
    /// e.g. `-0.375 + 0.625*e5 - 1*e1*e1 + 0.25*ep`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.center)?;
        let tail = |f: &mut fmt::Formatter<'_>, v: f64, suffix: String| {
            if v < 0.0 {
                write!(f, " - {}*{}", -v, suffix)
            } else {
                write!(f, " + {}*{}", v, suffix)
            }
        };
        for (s, &v) in &self.linear {
            tail(f, v, s.to_string())?;
        }
        for (&(i, j), &v) in &self.quad {
            tail(f, v, format!("{i}*{j}"))?;
        }
        if self.sym_err != 0.0 {
            tail(f, self.sym_err, "epm".to_string())?;
        }
        if self.pos_err != 0.0 {
            tail(f, self.pos_err, "ep".to_string())?;
        }
        if self.neg_err != 0.0 {
            tail(f, self.neg_err, "em".to_string())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(i: u64) -> NoiseSym {
        NoiseSym::from_id(i)
    }

    /// `ε₁ − ε₂ − ε₁²`, the running example form.
    fn example_form() -> QuadForm {
        QuadForm::new(
            0.0,
            [(sym(1), 1.0), (sym(2), -1.0)],
            [((sym(1), sym(1)), -1.0)],
            0.0,
            0.0,
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn concretize_mt_of_example_form() {
        let i = example_form().concretize_mt();
        assert_eq!((i.lo(), i.hi()), (-3.0, 2.0));
    }

    #[test]
    fn abstraction_of_point_is_bare_constant() {
        let reg = NoiseRegistry::new();
        let q = QuadForm::from_interval(Interval::point(1.0).unwrap(), &reg);
        assert!(q.is_constant());
        assert_eq!(q.center(), 1.0);
    }

    #[test]
    fn abstraction_of_dyadic_interval_is_exact() {
        let reg = NoiseRegistry::new();
        let q = QuadForm::from_interval(Interval::new(-1.0, 0.25).unwrap(), &reg);
        assert_eq!(q.center(), -0.375);
        assert_eq!(q.linear().len(), 1);
        assert_eq!(*q.linear().values().next().unwrap(), 0.625);
        let b = q.concretize_mt();
        assert_eq!((b.lo(), b.hi()), (-1.0, 0.25));
    }

    #[test]
    fn add_folds_rounding_into_symmetric_slot() {
        let x = QuadForm::constant(0.1).unwrap();
        let y = QuadForm::constant(0.2).unwrap();
        let s = x.add(&y).unwrap();
        let (_, e) = two_sum(0.1, 0.2);
        assert_eq!(s.center(), 0.1 + 0.2);
        assert_eq!(s.sym_err(), e.abs());
        assert!(s.sym_err() > 0.0, "0.1 + 0.2 rounds in binary64");
        // The exact value 0.3 is inside the concretization.
        let b = s.concretize_mt();
        assert!(b.lo() < 0.3 && 0.3 < b.hi() || b.contains(0.3));
    }

    #[test]
    fn dyadic_add_stays_exact() {
        let x = QuadForm::new(0.5, [(sym(1), 0.25)], [], 0.0, 0.0, 0.0).unwrap();
        let y = QuadForm::new(0.25, [(sym(1), 0.5)], [], 0.0, 0.0, 0.0).unwrap();
        let s = x.add(&y).unwrap();
        assert_eq!(s.center(), 0.75);
        assert_eq!(s.linear_coeff(sym(1)), 0.75);
        assert_eq!(s.sym_err(), 0.0);
    }

    #[test]
    fn add_cancels_opposite_coefficients() {
        let x = QuadForm::new(0.0, [(sym(1), 1.0)], [], 0.0, 0.0, 0.0).unwrap();
        let y = x.neg();
        let s = x.add(&y).unwrap();
        assert!(s.is_constant());
        assert_eq!(s.center(), 0.0);
    }

    #[test]
    fn neg_swaps_one_sided_slots_and_is_involutive() {
        let q = QuadForm::new(1.0, [(sym(1), 2.0)], [], 0.5, 0.25, 0.125).unwrap();
        let n = q.neg();
        assert_eq!(n.pos_err(), 0.125);
        assert_eq!(n.neg_err(), 0.25);
        assert_eq!(n.sym_err(), 0.5);
        assert_eq!(n.neg(), q);
    }

    #[test]
    fn scale_by_zero_is_zero() {
        let q = example_form();
        let z = q.scale(0.0).unwrap();
        assert!(z.is_constant());
        assert_eq!(z.center(), 0.0);
    }

    #[test]
    fn negative_scale_swaps_scaled_slots() {
        let q = QuadForm::new(0.0, [], [], 0.0, 1.0, 0.25).unwrap();
        let s = q.scale(-2.0).unwrap();
        assert_eq!(s.pos_err(), 0.5);
        assert_eq!(s.neg_err(), 2.0);
    }

    #[test]
    fn scale_by_minus_one_matches_neg() {
        let q = QuadForm::new(
            0.5,
            [(sym(1), -0.75), (sym(3), 2.0)],
            [((sym(1), sym(2)), 1.5), ((sym(2), sym(2)), -0.5)],
            0.25,
            1.0,
            0.0,
        )
        .unwrap();
        assert_eq!(q.scale(-1.0).unwrap(), q.neg());
    }

    #[test]
    fn square_of_plain_symbol_is_exact() {
        let x = QuadForm::new(0.0, [(sym(1), 1.0)], [], 0.0, 0.0, 0.0).unwrap();
        let sq = x.mul(&x).unwrap();
        assert_eq!(sq.center(), 0.0);
        assert!(sq.linear().is_empty());
        assert_eq!(sq.quad_coeff(sym(1), sym(1)), 1.0);
        assert_eq!((sq.sym_err(), sq.pos_err(), sq.neg_err()), (0.0, 0.0, 0.0));
        let b = sq.concretize_mt();
        assert_eq!((b.lo(), b.hi()), (0.0, 1.0));
    }

    #[test]
    fn product_of_disjoint_squares_routes_remainder_one_sidedly() {
        let x2 = QuadForm::new(0.0, [], [((sym(1), sym(1)), 1.0)], 0.0, 0.0, 0.0).unwrap();
        let y2 = QuadForm::new(0.0, [], [((sym(2), sym(2)), 1.0)], 0.0, 0.0, 0.0).unwrap();
        let p = x2.mul(&y2).unwrap();
        assert_eq!(p.center(), 0.0);
        assert!(p.linear().is_empty() && p.quad().is_empty());
        assert_eq!((p.sym_err(), p.pos_err(), p.neg_err()), (0.0, 1.0, 0.0));
    }

    #[test]
    fn multiplication_by_constant_form_is_identity_like() {
        let q = example_form();
        let one = QuadForm::constant(1.0).unwrap();
        assert_eq!(q.mul(&one).unwrap(), q);
        assert_eq!(one.mul(&q).unwrap(), q);
    }

    #[test]
    fn mul_keeps_slot_times_center_exact_and_routes_the_rest() {
        // x = 1 + ε₊,  y = 2 + ε₁.
        let x = QuadForm::new(1.0, [], [], 0.0, 1.0, 0.0).unwrap();
        let y = QuadForm::new(2.0, [(sym(1), 1.0)], [], 0.0, 0.0, 0.0).unwrap();
        let p = x.mul(&y).unwrap();
        assert_eq!(p.center(), 2.0);
        assert_eq!(p.linear_coeff(sym(1)), 1.0);
        // Exact slot part: 2·ε₊; remainder ε₊·ε₁ ∈ [−1, 1] routes (1, 1).
        assert_eq!(p.pos_err(), 3.0);
        assert_eq!(p.neg_err(), 1.0);
        assert_eq!(p.sym_err(), 0.0);
        // True range of (1+ε₊)(2+ε₁) is [1, 6]; the box must enclose it.
        let b = p.concretize_mt();
        assert!(b.lo() <= 1.0 && 6.0 <= b.hi());
    }

    #[test]
    fn route_examples() {
        assert_eq!(route_range_to_slots(2.0, 5.0), (5.0, 0.0));
        assert_eq!(route_range_to_slots(-3.0, -1.0), (0.0, 3.0));
        assert_eq!(route_range_to_slots(-1.0, 2.0), (2.0, 1.0));
    }

    #[test]
    fn eval_bounds_bracket_simple_values() {
        let q = example_form();
        let t = NoisePoint {
            plain: [(sym(1), 0.5), (sym(2), -1.0)].into_iter().collect(),
            ..Default::default()
        };
        // 0.5 + 1 − 0.25 = 1.25 exactly.
        let (lo, hi) = q.eval_bounds(&t);
        assert!(lo <= 1.25 && 1.25 <= hi);
        assert_eq!(lo, hi, "dyadic evaluation is exact");
    }

    #[test]
    fn display_round_trips_through_parser() {
        let q = QuadForm::new(
            -0.375,
            [(sym(5), 0.625)],
            [((sym(1), sym(1)), -1.0)],
            0.5,
            0.25,
            0.125,
        )
        .unwrap();
        let text = q.to_string();
        let back = crate::parse_form(&text).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn recip_and_sqrt_of_exact_constants_are_exact() {
        let reg = NoiseRegistry::new();
        let r = QuadForm::constant(2.0).unwrap().recip(&reg).unwrap();
        assert!(r.is_constant());
        assert_eq!(r.center(), 0.5);
        let s = QuadForm::constant(4.0).unwrap().sqrt(&reg).unwrap();
        assert!(s.is_constant());
        assert_eq!(s.center(), 2.0);
    }

    /// Bracket of the result form at fixed `εₐ = t`, sweeping the residual
    /// symbol and error slots to their extremes (their coefficients are all
    /// nonnegative, so the extremes sit at the slot endpoints).
    fn restricted_bounds(r: &QuadForm, a: NoiseSym, t: f64) -> (f64, f64) {
        let mut lo_pt = NoisePoint {
            sym: -1.0,
            pos: 0.0,
            neg: -1.0,
            ..Default::default()
        };
        let mut hi_pt = NoisePoint {
            sym: 1.0,
            pos: 1.0,
            neg: 0.0,
            ..Default::default()
        };
        for s in r.plain_symbols() {
            lo_pt.plain.insert(s, -1.0);
            hi_pt.plain.insert(s, 1.0);
        }
        lo_pt.plain.insert(a, t);
        hi_pt.plain.insert(a, t);
        (r.eval_bounds(&lo_pt).0, r.eval_bounds(&hi_pt).1)
    }

    #[test]
    fn recip_band_encloses_true_values_pointwise() {
        let reg = NoiseRegistry::new();
        let a = reg.fresh();
        let x = QuadForm::new(2.0, [(a, 1.0)], [], 0.0, 0.0, 0.0).unwrap();
        let r = x.recip(&reg).unwrap();
        for k in 0..=1000 {
            let t = -1.0 + 2.0 * (k as f64) / 1000.0;
            let v = 1.0 / (2.0 + t);
            let (lo, hi) = restricted_bounds(&r, a, t);
            assert!(lo <= v && v <= hi, "1/(2+{t}) = {v} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn sqrt_clips_negative_part_of_the_box() {
        let reg = NoiseRegistry::new();
        let a = reg.fresh();
        let x = QuadForm::new(0.0, [(a, 1.0)], [], 0.0, 0.0, 0.0).unwrap();
        let r = x.sqrt(&reg).unwrap();
        for k in 0..=1000 {
            let t = (k as f64) / 1000.0;
            let v = t.sqrt();
            let (lo, hi) = restricted_bounds(&r, a, t);
            assert!(lo <= v && v <= hi, "sqrt({t}) = {v} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn undefined_unary_domains_are_rejected() {
        let reg = NoiseRegistry::new();
        let a = reg.fresh();
        let x = QuadForm::new(0.0, [(a, 1.0)], [], 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            x.recip(&reg),
            Err(BandError::RecipThroughZero(..))
        ));
        let neg = QuadForm::constant(-4.0).unwrap();
        assert!(matches!(neg.sqrt(&reg), Err(BandError::SqrtNegative(..))));
    }

    #[test]
    fn overflow_is_reported_not_silently_kept() {
        let big = QuadForm::constant(1e308).unwrap();
        let sum = big.add(&big);
        assert_eq!(sum.unwrap_err(), FormError::Overflow);
        let q = QuadForm::new(1e308, [(sym(1), 1e308)], [], 0.0, 0.0, 0.0).unwrap();
        assert_eq!(q.mul(&q).unwrap_err(), FormError::Overflow);
    }
}
