//! Affine noise-symbol forms (the degree-1 baseline).
//!
//! `x = c + Σᵢ bᵢεᵢ` with shared `εᵢ ∈ [−1, 1]`. Linear operations are
//! exact up to rounding; multiplication bounds its nonlinear remainder by
//! `Σ|bᵢ| · Σ|b′ⱼ|` on one fresh symbol, in the classic self-validated
//! style. Rounding residuals are accounted on a fresh symbol as well, so
//! concretizations always enclose the exact real results.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::eft::{product_err_mag, two_product, two_sum};
use crate::interval::{ExtInterval, Interval};
use crate::minrange::{min_range_band, BandError, UnaryFn};
use crate::quad::FormError;
use crate::registry::{NoiseRegistry, NoiseSym};
use crate::round::{add_down, add_up, mul_up};

/// An affine noise-symbol form.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineForm {
    center: f64,
    linear: BTreeMap<NoiseSym, f64>,
}

impl AffineForm {
    pub fn constant(c: f64) -> Result<Self, FormError> {
        if c.is_nan() {
            return Err(FormError::Nan);
        }
        if !c.is_finite() {
            return Err(FormError::Overflow);
        }
        Ok(AffineForm {
            center: c,
            linear: BTreeMap::new(),
        })
    }

    pub fn new(
        center: f64,
        linear: impl IntoIterator<Item = (NoiseSym, f64)>,
    ) -> Result<Self, FormError> {
        let mut lin = BTreeMap::new();
        for (k, v) in linear {
            if v.is_nan() {
                return Err(FormError::Nan);
            }
            *lin.entry(k).or_insert(0.0) += v;
        }
        lin.retain(|_, v| *v != 0.0);
        Self::finish(center, lin)
    }

    /// Abstraction of a finite interval as `mid + radius·ε_fresh`; a point
    /// interval yields a bare constant.
    pub fn from_interval(i: Interval, reg: &NoiseRegistry) -> AffineForm {
        let mid = i.mid();
        let rad = i.radius_up();
        let mut linear = BTreeMap::new();
        if rad > 0.0 {
            linear.insert(reg.fresh(), rad);
        }
        AffineForm {
            center: mid,
            linear,
        }
    }

    fn finish(center: f64, linear: BTreeMap<NoiseSym, f64>) -> Result<Self, FormError> {
        if center.is_finite() && linear.values().all(|v| v.is_finite()) {
            Ok(AffineForm { center, linear })
        } else {
            Err(FormError::Overflow)
        }
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn linear(&self) -> &BTreeMap<NoiseSym, f64> {
        &self.linear
    }

    pub fn linear_coeff(&self, s: NoiseSym) -> f64 {
        self.linear.get(&s).copied().unwrap_or(0.0)
    }

    pub fn is_constant(&self) -> bool {
        self.linear.is_empty()
    }

    /// Upper bound on `Σ|bᵢ|`.
    fn deviation_up(&self) -> f64 {
        let mut s = 0.0;
        for &b in self.linear.values() {
            s = add_up(s, b.abs());
        }
        s
    }

    /// `[c − Σ|bᵢ|, c + Σ|bᵢ|]`, rounded outward.
    pub fn concretize(&self) -> ExtInterval {
        let d = self.deviation_up();
        ExtInterval::new(add_down(self.center, -d), add_up(self.center, d))
            .expect("deviation is nonnegative")
    }

    /// Sum; a fresh symbol carries the rounding residual when one occurred.
    pub fn add(&self, other: &AffineForm, reg: &NoiseRegistry) -> Result<AffineForm, FormError> {
        let mut err = 0.0f64;
        let (center, e) = two_sum(self.center, other.center);
        err = add_up(err, e.abs());
        let mut linear = self.linear.clone();
        for (&k, &v) in &other.linear {
            match linear.entry(k) {
                Entry::Occupied(mut o) => {
                    let (s, e) = two_sum(*o.get(), v);
                    err = add_up(err, e.abs());
                    if s == 0.0 {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
                Entry::Vacant(slot) => {
                    slot.insert(v);
                }
            }
        }
        if err > 0.0 {
            linear.insert(reg.fresh(), err);
        }
        Self::finish(center, linear)
    }

    pub fn sub(&self, other: &AffineForm, reg: &NoiseRegistry) -> Result<AffineForm, FormError> {
        self.add(&other.neg(), reg)
    }

    /// Negation; exact.
    pub fn neg(&self) -> AffineForm {
        AffineForm {
            center: -self.center,
            linear: self.linear.iter().map(|(&k, &v)| (k, -v)).collect(),
        }
    }

    /// Scalar multiple; a fresh symbol carries rounding residuals.
    pub fn scale(&self, k: f64, reg: &NoiseRegistry) -> Result<AffineForm, FormError> {
        if k.is_nan() {
            return Err(FormError::Nan);
        }
        if !k.is_finite() {
            return Err(FormError::Overflow);
        }
        if k == 0.0 {
            return AffineForm::constant(0.0);
        }
        let mut err = 0.0f64;
        let (center, e) = two_product(k, self.center);
        err = add_up(err, product_err_mag(center, e));
        let mut linear = BTreeMap::new();
        for (&key, &v) in &self.linear {
            let (p, e) = two_product(k, v);
            err = add_up(err, product_err_mag(p, e));
            if p != 0.0 {
                linear.insert(key, p);
            }
        }
        if err > 0.0 {
            linear.insert(reg.fresh(), err);
        }
        Self::finish(center, linear)
    }

    /// Product. The affine part is `c·y + c′·x − c·c′`; the bilinear
    /// remainder is bounded by `Σ|bᵢ|·Σ|b′ⱼ|` on one fresh symbol, which
    /// also absorbs the rounding residuals.
    pub fn mul(&self, other: &AffineForm, reg: &NoiseRegistry) -> Result<AffineForm, FormError> {
        let mut err = 0.0f64;
        let (center, e) = two_product(self.center, other.center);
        err = add_up(err, product_err_mag(center, e));
        let mut linear = BTreeMap::new();
        for (&k, &v) in &self.linear {
            let (p, e) = two_product(other.center, v);
            err = add_up(err, product_err_mag(p, e));
            if p != 0.0 {
                linear.insert(k, p);
            }
        }
        for (&k, &v) in &other.linear {
            let (p, e) = two_product(self.center, v);
            err = add_up(err, product_err_mag(p, e));
            match linear.entry(k) {
                Entry::Occupied(mut o) => {
                    let (s, e) = two_sum(*o.get(), p);
                    err = add_up(err, e.abs());
                    if s == 0.0 {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
                Entry::Vacant(slot) => {
                    if p != 0.0 {
                        slot.insert(p);
                    }
                }
            }
        }
        let rem = add_up(mul_up(self.deviation_up(), other.deviation_up()), err);
        if rem > 0.0 {
            linear.insert(reg.fresh(), rem);
        }
        Self::finish(center, linear)
    }

    /// Reciprocal via a minimum-range linear band over the form's box; the
    /// box must not contain zero.
    pub fn recip(&self, reg: &NoiseRegistry) -> Result<AffineForm, BandError> {
        let range = self.concretize();
        if range.contains(0.0) {
            return Err(BandError::RecipThroughZero(range.lo(), range.hi()));
        }
        let dom = range
            .bounded()
            .ok_or(BandError::Overflow(range.lo(), range.hi()))?;
        self.apply_band(UnaryFn::Recip, dom, reg)
    }

    /// Square root via a minimum-range linear band over the nonnegative part
    /// of the form's box; a box entirely below zero is an error.
    pub fn sqrt(&self, reg: &NoiseRegistry) -> Result<AffineForm, BandError> {
        let range = self.concretize();
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
    ) -> Result<AffineForm, BandError> {
        let band = min_range_band(f, dom)?;
        let overflow = |_| BandError::Overflow(dom.lo(), dom.hi());
        let scaled = self.scale(band.slope, reg).map_err(overflow)?;
        let residual: Vec<(NoiseSym, f64)> = if band.radius > 0.0 {
            vec![(reg.fresh(), band.radius)]
        } else {
            Vec::new()
        };
        let shift = AffineForm::new(band.offset, residual).map_err(overflow)?;
        scaled.add(&shift, reg).map_err(overflow)
    }

    /// Directed bounds on the form's value at a concrete assignment.
    pub fn eval_bounds(&self, plain: &BTreeMap<NoiseSym, f64>) -> (f64, f64) {
        let mut lo = self.center;
        let mut hi = self.center;
        for (s, &b) in &self.linear {
            let v = plain.get(s).copied().unwrap_or(0.0);
            lo = add_down(lo, crate::round::mul_down(b, v));
            hi = add_up(hi, mul_up(b, v));
        }
        (lo, hi)
    }
}
