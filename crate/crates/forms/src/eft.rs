//! Error-free transformations for binary64 arithmetic.
//!
//! `two_sum` and `two_product` return the rounded result together with the
//! exact rounding error, so callers can account for the error rigorously or
//! detect that an operation was exact (error ≡ 0).

/// 2²⁷ + 1, Veltkamp's constant for splitting a double into two halves.
const SPLITTER: f64 = 134_217_729.0;

/// Magnitude above which Veltkamp splitting can overflow.
const SPLIT_SAFE: f64 = 6.7e299;

/// Magnitude below which Dekker's error term can fall into the subnormal
/// range and stop being exactly representable.
const PRODUCT_SAFE: f64 = 1e-300;

/// Knuth's branch-free two-sum.
///
/// Returns `(s, e)` with `s = fl(a + b)` and `a + b = s + e` exactly in real
/// arithmetic, for finite inputs whose sum does not overflow.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Veltkamp split: `a = hi + lo` with both halves 26-bit representable.
#[inline]
fn split(a: f64) -> (f64, f64) {
    let c = SPLITTER * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

/// Dekker's two-product.
///
/// Returns `(p, e)` with `p = fl(a · b)` and `a · b = p + e` exactly,
/// provided the splitting does not overflow and the error term is
/// representable. When exactness cannot be guaranteed (overflow, huge
/// operands, or products deep in the subnormal range) the error component
/// is `f64::NAN`; use [`product_err_bound`] for a safe magnitude bound.
#[inline]
pub fn two_product(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    if a == 0.0 || b == 0.0 {
        // An exact (signed) zero product; the general path would divide
        // attention between ±0 and NaN from 0·∞.
        return (p, 0.0);
    }
    if !p.is_finite() || a.abs() >= SPLIT_SAFE || b.abs() >= SPLIT_SAFE || p.abs() < PRODUCT_SAFE {
        return (p, f64::NAN);
    }
    let (ahi, alo) = split(a);
    let (bhi, blo) = split(b);
    let e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
    (p, e)
}

/// Sound upper bound on `|a·b − fl(a·b)|` given `p = fl(a·b)`, for use when
/// [`two_product`] could not produce the exact error term.
#[inline]
pub fn product_err_bound(p: f64) -> f64 {
    if p.is_finite() {
        // Round-to-nearest error is at most half an ulp of the result; the
        // 1.125 factor and the additive floor absorb ulp-estimation slop and
        // subnormal underflow respectively.
        p.abs() * (f64::EPSILON / 2.0) * 1.125 + 1e-290
    } else {
        f64::INFINITY
    }
}

/// Magnitude of a two-product error term, falling back to the guaranteed
/// bound when the exact error was unavailable.
#[inline]
pub fn product_err_mag(p: f64, e: f64) -> f64 {
    if e.is_nan() {
        product_err_bound(p)
    } else {
        e.abs()
    }
}
