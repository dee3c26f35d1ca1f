//! Minimum-range linear enclosures for unary nonlinear functions.
//!
//! For `f ∈ {1/x, √x}` on a domain `[a, b]`, produces a band
//! `α·x + ζ ± δ` with `f(x) ∈ [αx + ζ − δ, αx + ζ + δ]` for every
//! `x ∈ [a, b]`. The slope is chosen as the derivative at the flatter end
//! (the classic minimum-range choice), with its rounding directed so the
//! residual `f(x) − αx` is provably monotone on the domain — its extremes
//! then sit at the endpoints, where they are evaluated with outward
//! rounding.

use thiserror::Error;

use crate::interval::Interval;
use crate::round::{add_down, add_up, div_down, div_up, mul_down, mul_up, sqrt_up, sub_up};

/// Unary functions with min-range support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryFn {
    /// `x ↦ 1/x`; the domain must not contain zero.
    Recip,
    /// `x ↦ √x`; the domain must be nonnegative.
    Sqrt,
}

/// A linear band `slope·x + offset ± radius` enclosing a function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearBand {
    pub slope: f64,
    pub offset: f64,
    pub radius: f64,
}

/// Errors from band construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BandError {
    #[error("1/x is undefined on [{0}, {1}]: domain contains zero")]
    RecipThroughZero(f64, f64),
    #[error("√x is undefined on [{0}, {1}]: domain has negative values")]
    SqrtNegative(f64, f64),
    #[error("band bounds overflowed on [{0}, {1}]")]
    Overflow(f64, f64),
}

/// Directed evaluations of `f` at a point: the true value is in `[dn, up]`.
fn eval_dir(f: UnaryFn, x: f64) -> (f64, f64) {
    match f {
        UnaryFn::Recip => (div_down(1.0, x), div_up(1.0, x)),
        UnaryFn::Sqrt => (crate::round::sqrt_down(x), sqrt_up(x)),
    }
}

/// The min-range slope, rounded so the residual `f − α·x` is monotone.
///
/// For `1/x` the residual derivative is `−1/x² − α`; choosing `α` at or
/// above the largest derivative on the domain keeps it nonpositive. For
/// `√x` the residual derivative is `1/(2√x) − α`; choosing `α` at or below
/// the smallest derivative keeps it nonnegative.
fn monotone_slope(f: UnaryFn, dom: Interval) -> f64 {
    match f {
        UnaryFn::Recip => {
            // Derivative −1/x² peaks at the endpoint of larger magnitude.
            let at = if dom.lo() > 0.0 { dom.hi() } else { dom.lo() };
            // mul_up(at, at) ≥ at², so −1/mul_up ≥ −1/at²; div_up keeps it so.
            div_up(-1.0, mul_up(at, at))
        }
        UnaryFn::Sqrt => {
            // Derivative 1/(2√x) is smallest at the right endpoint.
            div_down(1.0, mul_up(2.0, sqrt_up(dom.hi())))
        }
    }
}

/// Builds the minimum-range band of `f` over `dom`.
///
/// On a point domain where `f` evaluates exactly, the band is the exact
/// constant with zero radius.
pub fn min_range_band(f: UnaryFn, dom: Interval) -> Result<LinearBand, BandError> {
    let (a, b) = (dom.lo(), dom.hi());
    match f {
        UnaryFn::Recip => {
            if a <= 0.0 && b >= 0.0 {
                return Err(BandError::RecipThroughZero(a, b));
            }
        }
        UnaryFn::Sqrt => {
            if a < 0.0 {
                return Err(BandError::SqrtNegative(a, b));
            }
        }
    }

    if a == b {
        let (dn, up) = eval_dir(f, a);
        let offset = dn / 2.0 + up / 2.0;
        let radius = sub_up(up, offset).max(sub_up(offset, dn)).max(0.0);
        return finish(0.0, offset, radius, dom);
    }
    // √ on a domain touching 0 has unbounded derivative at the left end; a
    // linear band around a nonzero slope would still be sound, but the
    // monotone-residual argument needs a finite slope at both ends. Treat
    // the whole image as the band in that case.
    if f == UnaryFn::Sqrt && a == 0.0 {
        let hi = sqrt_up(b);
        let offset = hi / 2.0;
        let radius = sub_up(hi, offset).max(offset);
        return finish(0.0, offset, radius, dom);
    }

    let slope = monotone_slope(f, dom);
    // Residual g(x) = f(x) − slope·x is monotone, so its range over the
    // domain is spanned by the endpoint values; evaluate both outward.
    let g_up = |x: f64| {
        let (_, f_up) = eval_dir(f, x);
        sub_up(f_up, mul_down(slope, x))
    };
    let g_dn = |x: f64| {
        let (f_dn, _) = eval_dir(f, x);
        add_down(f_dn, -mul_up(slope, x))
    };
    let m = g_dn(a).min(g_dn(b));
    let big = g_up(a).max(g_up(b));
    let offset = m / 2.0 + big / 2.0;
    let radius = sub_up(big, offset).max(sub_up(offset, m)).max(0.0);
    finish(slope, offset, radius, dom)
}

fn finish(slope: f64, offset: f64, radius: f64, dom: Interval) -> Result<LinearBand, BandError> {
    if slope.is_finite() && offset.is_finite() && radius.is_finite() {
        Ok(LinearBand {
            slope,
            offset,
            radius,
        })
    } else {
        Err(BandError::Overflow(dom.lo(), dom.hi()))
    }
}

impl LinearBand {
    /// Directed bounds of the band at `x`: `[lo(x), hi(x)]` encloses
    /// `slope·x + offset ± radius` in real arithmetic.
    pub fn bounds_at(&self, x: f64) -> (f64, f64) {
        let t_dn = mul_down(self.slope, x);
        let t_up = mul_up(self.slope, x);
        let lo = add_down(add_down(t_dn, self.offset), -self.radius);
        let hi = add_up(add_up(t_up, self.offset), self.radius);
        (lo, hi)
    }
}
