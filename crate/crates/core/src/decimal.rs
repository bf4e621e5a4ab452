//! Exact decimal inputs.
//!
//! Parameters such as `0.3` or a grid step of `0.001` have no binary64
//! representation. They are kept as exact rationals and only turned into
//! floating point through an outward enclosure.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a decimal number: {0:?}")]
pub struct ParseDecimalError(pub String);

/// A decimal literal kept as the exact rational it denotes.
#[derive(Clone, PartialEq, Eq)]
pub struct Decimal {
    text: String,
    value: BigRational,
}

impl Decimal {
    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Tightest binary64 interval containing the value.
    pub fn enclose(&self) -> Interval {
        enclose(&self.value)
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact decimal of a binary64 value (shortest round-trip text).
    pub fn from_f64(x: f64) -> Option<Decimal> {
        if !x.is_finite() {
            return None;
        }
        format!("{x:?}").parse().ok()
    }
}

impl FromStr for Decimal {
    type Err = ParseDecimalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let value = parse_rational(s).ok_or_else(|| ParseDecimalError(s.to_string()))?;
        Ok(Decimal {
            text: s.trim().to_string(),
            value,
        })
    }
}

impl fmt::Debug for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Decimal({})", self.text)
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses `[+-]digits[.digits][e[+-]digits]`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (neg, rest) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exp) = match rest.find(['e', 'E']) {
        Some(i) => (&rest[..i], rest[i + 1..].parse::<i32>().ok()?),
        None => (rest, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let digits = digits / BigInt::from(10);
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

/// Exact rational value of a finite binary64.
pub fn rational_of(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Tightest binary64 interval containing `r`.
///
/// Panics if `r` is outside the binary64 range.
pub fn enclose(r: &BigRational) -> Interval {
    if r.is_zero() {
        return Interval::ZERO;
    }
    let guess = r
        .to_f64()
        .filter(|g| g.is_finite())
        .expect("rational within binary64 range");
    let mut lo = guess;
    while &rational_of(lo) > r {
        lo = lo.next_down();
    }
    let mut hi = guess;
    while &rational_of(hi) < r {
        hi = hi.next_up();
    }
    Interval::new(lo, hi).expect("ordered enclosure")
}

/// Exact rational grid `lo_k = min + k*step` for `k = 0..n`, with the last
/// upper end clipped to `max`. Returns the exact endpoints.
pub fn rational_grid(
    min: &BigRational,
    max: &BigRational,
    step: &BigRational,
) -> Option<Vec<(BigRational, BigRational)>> {
    if !step.is_positive() || min >= max {
        return None;
    }
    let span = (max - min) / step;
    let n = span.ceil().to_integer();
    let n = n.to_usize()?;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lo = min + step * BigRational::from_integer(BigInt::from(k));
        let mut hi = &lo + step;
        if &hi > max {
            hi = max.clone();
        }
        out.push((lo, hi));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_decimals() {
        assert_eq!(parse_rational("0.3"), Some(q(3, 10)));
        assert_eq!(parse_rational("-9.5"), Some(q(-19, 2)));
        assert_eq!(parse_rational("1e-3"), Some(q(1, 1000)));
        assert_eq!(parse_rational("5E-4"), Some(q(1, 2000)));
        assert_eq!(parse_rational("2"), Some(q(2, 1)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1.2.3"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn enclosure_is_tight() {
        let r = q(3, 10);
        let iv = enclose(&r);
        assert!(rational_of(iv.lo()) < r && r < rational_of(iv.hi()));
        assert_eq!(iv.lo().next_up(), iv.hi());
        assert!(enclose(&q(-19, 2)).is_point());
    }

    #[test]
    fn grid_counts() {
        let g = rational_grid(&q(101, 100), &q(1125, 1000), &q(1, 1000)).unwrap();
        assert_eq!(g.len(), 115);
        assert_eq!(g[114].1, q(1125, 1000));
        let g = rational_grid(&q(12, 10), &q(121, 100), &q(1, 1000)).unwrap();
        assert_eq!(g.len(), 10);
        let g = rational_grid(&q(0, 1), &q(1, 1), &q(3, 10)).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g[3], (q(9, 10), q(1, 1)));
        assert!(rational_grid(&q(1, 1), &q(0, 1), &q(1, 10)).is_none());
    }

    #[test]
    fn serde_keeps_text() {
        let d: Decimal = serde_json::from_str("\"0.001\"").unwrap();
        assert_eq!(d.value(), &q(1, 1000));
        assert_eq!(serde_json::to_string(&d).unwrap(), "\"0.001\"");
        assert_eq!(Decimal::from_f64(0.5).unwrap().value(), &q(1, 2));
    }
}
