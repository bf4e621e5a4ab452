//! Closed real intervals with binary64 endpoints and outward rounding.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rounding::*;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("interval endpoint is not finite ({lo}, {hi})")]
    NonFinite { lo: f64, hi: f64 },
    #[error("interval endpoints out of order: {lo} > {hi}")]
    Reversed { lo: f64, hi: f64 },
    #[error("division by an interval containing 0: [{lo}, {hi}]")]
    DivisionByZero { lo: f64, hi: f64 },
    #[error("square root of an interval with negative part: [{lo}, {hi}]")]
    NegativeSqrt { lo: f64, hi: f64 },
    #[error("determinant contains 0")]
    SingularMatrix,
}

/// A nonempty closed interval `[lo, hi]`.
///
/// Every arithmetic operation returns an enclosure of the exact real result.
/// Endpoints may only become infinite through overflow, which none of the
/// computations in this crate come close to.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::NonFinite { lo, hi });
        }
        if lo > hi {
            return Err(IntervalError::Reversed { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval `[x, x]`.
    ///
    /// Panics if `x` is not finite.
    pub fn point(x: f64) -> Self {
        assert!(x.is_finite(), "point interval from non-finite value {x}");
        Interval { lo: x, hi: x }
    }

    /// Interval spanning both values in either order.
    pub fn spanning(a: f64, b: f64) -> Result<Self, IntervalError> {
        Interval::new(a.min(b), a.max(b))
    }

    /// Symmetric interval `[-r, r]`.
    pub fn symmetric(r: f64) -> Result<Self, IntervalError> {
        let r = r.abs();
        Interval::new(-r, r)
    }

    #[inline]
    pub(crate) fn raw(lo: f64, hi: f64) -> Self {
        debug_assert!(!(lo > hi), "raw interval out of order: {lo} > {hi}");
        Interval { lo, hi }
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    /// Upper bound on the width.
    pub fn width(self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    /// A binary64 value inside the interval, close to its center.
    pub fn midpoint(self) -> f64 {
        if self.lo == -self.hi {
            return 0.0;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Largest absolute value of a member.
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    pub fn subset(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self` lies in the interior of `other`.
    pub fn strict_subset(self, other: Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn hull(self, other: Interval) -> Interval {
        Interval::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Intersection, or `None` for disjoint intervals.
    pub fn intersect(self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Interval::raw(lo, hi))
    }

    /// Widens each endpoint outward by `eps` (rounded outward).
    pub fn inflate(self, eps: f64) -> Interval {
        let eps = eps.abs();
        Interval::raw(sub_down(self.lo, eps), add_up(self.hi, eps))
    }

    /// Moves each endpoint one representable value outward.
    pub fn widen_ulp(self) -> Interval {
        Interval::raw(self.lo.next_down(), self.hi.next_up())
    }

    /// `self < other` for every pair of members.
    pub fn certainly_lt(self, other: Interval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_gt(self, other: Interval) -> bool {
        self.lo > other.hi
    }

    pub fn certainly_positive(self) -> bool {
        self.lo > 0.0
    }

    pub fn certainly_negative(self) -> bool {
        self.hi < 0.0
    }

    /// Sharp square: never has a negative part.
    pub fn sqr(self) -> Interval {
        if self.lo >= 0.0 {
            Interval::raw(mul_down(self.lo, self.lo), mul_up(self.hi, self.hi))
        } else if self.hi <= 0.0 {
            Interval::raw(mul_down(self.hi, self.hi), mul_up(self.lo, self.lo))
        } else {
            let m = self.mag();
            Interval::raw(0.0, mul_up(m, m))
        }
    }

    pub fn sqrt(self) -> Result<Interval, IntervalError> {
        if self.lo < 0.0 {
            return Err(IntervalError::NegativeSqrt {
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(Interval::raw(sqrt_down(self.lo), sqrt_up(self.hi)))
    }

    /// Integer power by repeated multiplication; even powers use `sqr`.
    pub fn powi(self, n: u32) -> Interval {
        match n {
            0 => Interval::ONE,
            1 => self,
            _ if n.is_multiple_of(2) => self.powi(n / 2).sqr(),
            _ => self * self.powi(n - 1),
        }
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval::raw(0.0, self.mag())
        }
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.contains_zero() {
            return Err(IntervalError::DivisionByZero { lo: rhs.lo, hi: rhs.hi });
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo = div_down(a, c)
            .min(div_down(a, d))
            .min(div_down(b, c))
            .min(div_down(b, d));
        let hi = div_up(a, c).max(div_up(a, d)).max(div_up(b, c)).max(div_up(b, d));
        Ok(Interval::raw(lo, hi))
    }

    pub fn scale(self, k: f64) -> Interval {
        self * Interval::point(k)
    }

    /// Fused `self * a + b` evaluated as two rounded interval operations.
    pub fn mul_add(self, a: Interval, b: Interval) -> Interval {
        self * a + b
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval::raw(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval::raw(sub_down(self.lo, rhs.hi), sub_up(self.hi, rhs.lo))
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if a >= 0.0 && c >= 0.0 {
            return Interval::raw(mul_down(a, c), mul_up(b, d));
        }
        let lo = mul_down(a, c)
            .min(mul_down(a, d))
            .min(mul_down(b, c))
            .min(mul_down(b, d));
        let hi = mul_up(a, c).max(mul_up(a, d)).max(mul_up(b, c)).max(mul_up(b, d));
        Interval::raw(lo, hi)
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval::raw(-self.hi, -self.lo)
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

// Serialized as a two-element array `[lo, hi]`.
impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [lo, hi] = <[f64; 2]>::deserialize(d)?;
        Interval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}
