//! Closed intervals with outward-rounded arithmetic.
//!
//! [`Interval`] has finite endpoints and is the currency of abstraction
//! (`α`) — an unbounded set has no finite form. [`ExtInterval`] ranges over
//! the extended reals and is the lattice used for concretizations, guards
//! (half-lines) and the plain interval domain; its arithmetic rounds
//! outward, so every result encloses the exact set of real results.

use crate::round::{add_down, add_up, div_down, div_up, mul_down, mul_up, sqrt_down, sqrt_up, sub_up};
use thiserror::Error;

/// Errors from interval construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("interval endpoints must not be NaN")]
    Nan,
    #[error("interval endpoints must be finite, got [{0}, {1}]")]
    Unbounded(f64, f64),
    #[error("interval endpoints out of order: [{0}, {1}]")]
    Reversed(f64, f64),
}

/// A nonempty closed interval with finite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// Constructs `[lo, hi]`, rejecting NaN, infinities, and `lo > hi`.
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() {
            return Err(IntervalError::Nan);
        }
        if !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::Unbounded(lo, hi));
        }
        if lo > hi {
            return Err(IntervalError::Reversed(lo, hi));
        }
        Ok(Self { lo, hi })
    }

    /// The degenerate interval `[v, v]`.
    pub fn point(v: f64) -> Result<Self, IntervalError> {
        Self::new(v, v)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// A midpoint that is always inside the interval and overflow-safe.
    pub fn mid(&self) -> f64 {
        let m = self.lo / 2.0 + self.hi / 2.0;
        m.clamp(self.lo, self.hi)
    }

    /// Upper bound on the distance from [`Self::mid`] to either endpoint.
    pub fn radius_up(&self) -> f64 {
        let m = self.mid();
        sub_up(self.hi, m).max(sub_up(m, self.lo))
    }

    pub fn width_up(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn encloses(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Intersection; `None` when the intervals are disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A nonempty closed interval over the extended reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtInterval {
    lo: f64,
    hi: f64,
}

impl ExtInterval {
    /// Constructs `[lo, hi]`; endpoints may be infinite but the interval
    /// must be a nonempty subset of the extended reals with at least one
    /// real point (so `[+∞, +∞]` and `[−∞, −∞]` are rejected).
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() {
            return Err(IntervalError::Nan);
        }
        if lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(IntervalError::Reversed(lo, hi));
        }
        Ok(Self { lo, hi })
    }

    /// The whole extended real line (the lattice top).
    pub fn whole() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    /// Half-line `[lo, +∞)`.
    pub fn at_least(lo: f64) -> Self {
        debug_assert!(!lo.is_nan() && lo < f64::INFINITY);
        Self {
            lo,
            hi: f64::INFINITY,
        }
    }

    /// Half-line `(−∞, hi]`.
    pub fn at_most(hi: f64) -> Self {
        debug_assert!(!hi.is_nan() && hi > f64::NEG_INFINITY);
        Self {
            lo: f64::NEG_INFINITY,
            hi,
        }
    }

    pub fn point(v: f64) -> Self {
        debug_assert!(v.is_finite());
        Self { lo: v, hi: v }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_whole(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }

    /// The same interval as a finite [`Interval`], if it is bounded.
    pub fn bounded(&self) -> Option<Interval> {
        (self.lo.is_finite() && self.hi.is_finite()).then_some(Interval {
            lo: self.lo,
            hi: self.hi,
        })
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn encloses(&self, other: &ExtInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn hull(&self, other: &ExtInterval) -> ExtInterval {
        ExtInterval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersect(&self, other: &ExtInterval) -> Option<ExtInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        ExtInterval::new(lo, hi).ok()
    }

    pub fn width_up(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    pub fn neg(&self) -> ExtInterval {
        ExtInterval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn add(&self, other: &ExtInterval) -> ExtInterval {
        ExtInterval {
            lo: add_down(self.lo, other.lo),
            hi: add_up(self.hi, other.hi),
        }
    }

    pub fn sub(&self, other: &ExtInterval) -> ExtInterval {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ExtInterval) -> ExtInterval {
        // Endpoint products with the interval convention 0 · ±∞ = 0 (the
        // zero factor is an exact real; the infinite endpoint only marks
        // unboundedness of the other factor's range).
        let lo = Self::pmul(self.lo, other.lo, false)
            .min(Self::pmul(self.lo, other.hi, false))
            .min(Self::pmul(self.hi, other.lo, false))
            .min(Self::pmul(self.hi, other.hi, false));
        let hi = Self::pmul(self.lo, other.lo, true)
            .max(Self::pmul(self.lo, other.hi, true))
            .max(Self::pmul(self.hi, other.lo, true))
            .max(Self::pmul(self.hi, other.hi, true));
        ExtInterval { lo, hi }
    }

    fn pmul(x: f64, y: f64, up: bool) -> f64 {
        if x == 0.0 || y == 0.0 {
            0.0
        } else if up {
            mul_up(x, y)
        } else {
            mul_down(x, y)
        }
    }

    /// Quotient; the whole line when the divisor can be zero.
    pub fn div(&self, other: &ExtInterval) -> ExtInterval {
        if other.contains(0.0) {
            return ExtInterval::whole();
        }
        let lo = Self::pdiv(self.lo, other.lo, false)
            .min(Self::pdiv(self.lo, other.hi, false))
            .min(Self::pdiv(self.hi, other.lo, false))
            .min(Self::pdiv(self.hi, other.hi, false));
        let hi = Self::pdiv(self.lo, other.lo, true)
            .max(Self::pdiv(self.lo, other.hi, true))
            .max(Self::pdiv(self.hi, other.lo, true))
            .max(Self::pdiv(self.hi, other.hi, true));
        ExtInterval { lo, hi }
    }

    fn pdiv(x: f64, y: f64, up: bool) -> f64 {
        if x == 0.0 {
            0.0
        } else if y.is_infinite() {
            // x/±∞ → 0 in the limit; 0 is a sound closed bound.
            0.0
        } else if up {
            div_up(x, y)
        } else {
            div_down(x, y)
        }
    }

    /// Square root; `None` when the interval is entirely negative.
    /// Negative parts of a straddling interval are clipped to zero.
    pub fn sqrt(&self) -> Option<ExtInterval> {
        if self.hi < 0.0 {
            return None;
        }
        let lo = if self.lo <= 0.0 { 0.0 } else { sqrt_down(self.lo) };
        let hi = if self.hi == f64::INFINITY {
            f64::INFINITY
        } else {
            sqrt_up(self.hi)
        };
        Some(ExtInterval { lo, hi })
    }
}

impl From<Interval> for ExtInterval {
    fn from(i: Interval) -> Self {
        ExtInterval { lo: i.lo, hi: i.hi }
    }
}

impl std::fmt::Display for ExtInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
