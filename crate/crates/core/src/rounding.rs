//! Directed rounding on top of round-to-nearest binary64.
//!
//! Each helper computes the nearest-rounded result, recovers the sign of the
//! rounding error with an error-free transformation, and steps one ulp outward
//! only when the result was inexact. Near the underflow range the error terms
//! are no longer exact, so those cases step outward unconditionally.

/// Below this magnitude FMA residuals may be inexact.
const TINY: f64 = 1.0e-290;

#[inline]
fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

#[inline]
pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return s;
    }
    if two_sum_err(a, b, s) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub(crate) fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if !p.is_finite() {
        return p;
    }
    if p.abs() < TINY {
        return p.next_down();
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

#[inline]
pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if !p.is_finite() {
        return p;
    }
    if p.abs() < TINY {
        return p.next_up();
    }
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// Sign of `a/b - q` where `q` is the nearest-rounded quotient, or `None`
/// when the residual cannot be trusted.
#[inline]
fn div_err_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if a.abs() < TINY || q.abs() < TINY || !q.is_finite() {
        return None;
    }
    let r = (-q).mul_add(b, a);
    Some(if b > 0.0 { r } else { -r })
}

#[inline]
pub(crate) fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    match div_err_sign(a, b, q) {
        Some(e) if e >= 0.0 => q,
        Some(_) => q.next_down(),
        None if q.is_finite() => q.next_down(),
        None => q,
    }
}

#[inline]
pub(crate) fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    match div_err_sign(a, b, q) {
        Some(e) if e <= 0.0 => q,
        Some(_) => q.next_up(),
        None if q.is_finite() => q.next_up(),
        None => q,
    }
}

#[inline]
pub(crate) fn sqrt_down(a: f64) -> f64 {
    let r = a.sqrt();
    if a == 0.0 {
        return 0.0;
    }
    if a < TINY {
        return r.next_down().max(0.0);
    }
    if (-r).mul_add(r, a) < 0.0 {
        r.next_down()
    } else {
        r
    }
}

#[inline]
pub(crate) fn sqrt_up(a: f64) -> f64 {
    let r = a.sqrt();
    if a == 0.0 {
        return 0.0;
    }
    if a < TINY {
        return r.next_up();
    }
    if (-r).mul_add(r, a) > 0.0 {
        r.next_up()
    } else {
        r
    }
}
