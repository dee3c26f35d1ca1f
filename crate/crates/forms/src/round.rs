//! Directed-rounding scalar arithmetic.
//!
//! Each helper returns a result that is guaranteed to be on the requested
//! side of the exact real-arithmetic result, while staying *bit-exact* when
//! the floating-point operation itself was exact. The exactness test uses
//! error-free transformations instead of unconditionally nudging, so dyadic
//! computations (e.g. sums of quarters and eighths) keep their exact values.

use crate::eft::{product_err_bound, two_product, two_sum};

/// `fl(a + b)` rounded toward +∞.
#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    if a.is_infinite() || b.is_infinite() {
        return a + b;
    }
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        // Overflow of a finite sum: next_up turns −∞ into −MAX and keeps +∞.
        return s.next_up();
    }
    if e > 0.0 {
        s.next_up()
    } else {
        s
    }
}

/// `fl(a + b)` rounded toward −∞.
#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    if a.is_infinite() || b.is_infinite() {
        return a + b;
    }
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        return s.next_down();
    }
    if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

/// `fl(a − b)` rounded toward +∞.
#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

/// `fl(a − b)` rounded toward −∞.
#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

/// `fl(a · b)` rounded toward +∞.
#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    let (p, e) = two_product(a, b);
    if e.is_nan() {
        if p.is_finite() {
            return add_up(p, product_err_bound(p));
        }
        // 0·∞ cannot occur here (two_product short-circuits zeros), so a
        // non-finite p is a genuine ±∞ result or overflow.
        return p.next_up();
    }
    if e > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// `fl(a · b)` rounded toward −∞.
#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    let (p, e) = two_product(a, b);
    if e.is_nan() {
        if p.is_finite() {
            return add_down(p, -product_err_bound(p));
        }
        return p.next_down();
    }
    if e < 0.0 {
        p.next_down()
    } else {
        p
    }
}

/// True if `q = a / b` is exact, i.e. `q · b == a` with an exact product.
#[inline]
fn div_is_exact(q: f64, a: f64, b: f64) -> bool {
    let (p, e) = two_product(q, b);
    e == 0.0 && p == a
}

/// `fl(a / b)` rounded toward +∞. `b` must be nonzero.
#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return q.next_up();
    }
    if div_is_exact(q, a, b) {
        q
    } else {
        q.next_up()
    }
}

/// `fl(a / b)` rounded toward −∞. `b` must be nonzero.
#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return q.next_down();
    }
    if div_is_exact(q, a, b) {
        q
    } else {
        q.next_down()
    }
}

/// `fl(√a)` rounded toward +∞. `a` must be nonnegative.
#[inline]
pub fn sqrt_up(a: f64) -> f64 {
    let s = a.sqrt();
    if !s.is_finite() {
        return s;
    }
    let (p, e) = two_product(s, s);
    if e == 0.0 && p == a {
        s
    } else {
        s.next_up()
    }
}

/// `fl(√a)` rounded toward −∞. `a` must be nonnegative.
#[inline]
pub fn sqrt_down(a: f64) -> f64 {
    let s = a.sqrt();
    if !s.is_finite() {
        return s;
    }
    let (p, e) = two_product(s, s);
    if e == 0.0 && p == a {
        s
    } else {
        s.next_down()
    }
}
